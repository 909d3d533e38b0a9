#include "pgfb/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

namespace pgfb {

namespace {

std::vector<std::string_view> split_ws(std::string_view line)
{
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()){
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t'
            || line[i] == '\r')){ i++; }
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t'
            && line[j] != '\r'){ j++; }
        if (j > i){ tokens.push_back(line.substr(i, j - i)); }
        i = j;
    }
    return tokens;
}

[[noreturn]] void parse_fail(const std::filesystem::path& file,
    std::size_t line_no, const std::string& what)
{
    throw ParseError(file.string() + ":" + std::to_string(line_no) + ": "
        + what);
}

double parse_real(std::string_view tok, const std::filesystem::path& file,
    std::size_t line_no)
{
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data()
        + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()){
        parse_fail(file, line_no, "malformed real '" + std::string(tok)
            + "'");
    }
    return v;
}

std::uint64_t parse_index(std::string_view tok,
    const std::filesystem::path& file, std::size_t line_no)
{
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data()
        + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()){
        parse_fail(file, line_no, "malformed index '" + std::string(tok)
            + "'");
    }
    return v;
}

std::vector<std::string> read_lines(const std::filesystem::path& file)
{
    std::ifstream in(file);
    if (!in){
        throw ParseError(file.string() + ": cannot open");
    }
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)){ lines.push_back(line); }
    return lines;
}

} // namespace

GraphProblem load_problem(const std::filesystem::path& vertex_file,
    const std::filesystem::path& edge_file)
{
    /* vertex table */
    const std::vector<std::string> vlines = read_lines(vertex_file);
    if (vlines.empty()){ parse_fail(vertex_file, 1, "missing header"); }
    const auto vheader = split_ws(vlines[0]);
    bool has_nu;
    if (vheader.size() == 5 && vheader[0] == "vertex" && vheader[1] == "y"
        && vheader[2] == "lam_l2" && vheader[3] == "lam_l1"
        && vheader[4] == "nu"){
        has_nu = true;
    }else if (vheader.size() == 4 && vheader[0] == "vertex"
        && vheader[1] == "y" && vheader[2] == "lam_l2"
        && vheader[3] == "lam_l1"){
        has_nu = false;
    }else{
        parse_fail(vertex_file, 1,
            "expected header 'vertex y lam_l2 lam_l1 [nu]'");
    }

    std::vector<double> y, lam_l2, lam_l1, nu;
    for (std::size_t i = 1; i < vlines.size(); i++){
        const auto tok = split_ws(vlines[i]);
        if (tok.empty()){ continue; }
        const std::size_t want = has_nu ? 5 : 4;
        if (tok.size() != want){
            parse_fail(vertex_file, i + 1, "expected "
                + std::to_string(want) + " columns, got "
                + std::to_string(tok.size()));
        }
        const std::uint64_t id = parse_index(tok[0], vertex_file, i + 1);
        if (id != y.size()){
            parse_fail(vertex_file, i + 1, "vertex ids must be "
                "0..|V|-1 in order; expected " + std::to_string(y.size()));
        }
        y.push_back(parse_real(tok[1], vertex_file, i + 1));
        lam_l2.push_back(parse_real(tok[2], vertex_file, i + 1));
        lam_l1.push_back(parse_real(tok[3], vertex_file, i + 1));
        if (has_nu){ nu.push_back(parse_real(tok[4], vertex_file, i + 1)); }
    }
    if (y.empty()){ parse_fail(vertex_file, 1, "no vertex rows"); }
    const std::size_t V = y.size();

    /* edge table */
    const std::vector<std::string> elines = read_lines(edge_file);
    if (elines.empty()){ parse_fail(edge_file, 1, "missing header"); }
    const auto eheader = split_ws(elines[0]);
    bool has_mu;
    if (eheader.size() == 4 && eheader[0] == "u" && eheader[1] == "v"
        && eheader[2] == "lam_d1" && eheader[3] == "mu"){
        has_mu = true;
    }else if (eheader.size() == 3 && eheader[0] == "u" && eheader[1] == "v"
        && eheader[2] == "lam_d1"){
        has_mu = false;
    }else{
        parse_fail(edge_file, 1, "expected header 'u v lam_d1 [mu]'");
    }

    std::vector<Edge> edges;
    std::vector<double> lam_d1, mu;
    std::vector<std::size_t> edge_line; // for validation messages
    for (std::size_t i = 1; i < elines.size(); i++){
        const auto tok = split_ws(elines[i]);
        if (tok.empty()){ continue; }
        const std::size_t want = has_mu ? 4 : 3;
        if (tok.size() != want){
            parse_fail(edge_file, i + 1, "expected " + std::to_string(want)
                + " columns, got " + std::to_string(tok.size()));
        }
        const std::uint64_t u = parse_index(tok[0], edge_file, i + 1);
        const std::uint64_t v = parse_index(tok[1], edge_file, i + 1);
        if (u >= V || v >= V){
            parse_fail(edge_file, i + 1, "endpoint out of range");
        }
        edges.push_back({(vertex_t) u, (vertex_t) v});
        lam_d1.push_back(parse_real(tok[2], edge_file, i + 1));
        if (has_mu){ mu.push_back(parse_real(tok[3], edge_file, i + 1)); }
        edge_line.push_back(i + 1);
    }

    try{
        return make_problem((vertex_t) V, std::move(edges), std::move(y),
            std::move(lam_l2), std::move(lam_d1), std::move(lam_l1),
            std::move(mu), std::move(nu));
    }catch (const ValidationError& err){
        /* map "edge N"/"vertex N" messages back to line numbers */
        const std::string msg(err.what());
        if (msg.rfind("edge ", 0) == 0){
            const std::size_t e = std::stoul(msg.substr(5));
            throw ValidationError(edge_file.string() + ":"
                + std::to_string(edge_line[e]) + ": " + msg);
        }
        if (msg.rfind("vertex ", 0) == 0){
            const std::size_t v = std::stoul(msg.substr(7));
            throw ValidationError(vertex_file.string() + ":"
                + std::to_string(v + 2) + ": " + msg);
        }
        throw;
    }
}

namespace {

std::string fmt_real(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

void write_problem(const std::filesystem::path& vertex_file,
    const std::filesystem::path& edge_file, const GraphProblem& p)
{
    std::ofstream vf(vertex_file);
    if (!vf){ throw ParseError(vertex_file.string() + ": cannot write"); }
    vf << "vertex y lam_l2 lam_l1" << (p.has_nu() ? " nu" : "") << "\n";
    for (std::size_t v = 0; v < p.num_vertices; v++){
        vf << v << ' ' << fmt_real(p.y[v]) << ' ' << fmt_real(p.lam_l2[v])
           << ' ' << fmt_real(p.lam_l1[v]);
        if (p.has_nu()){ vf << ' ' << fmt_real(p.nu[v]); }
        vf << '\n';
    }
    std::ofstream ef(edge_file);
    if (!ef){ throw ParseError(edge_file.string() + ": cannot write"); }
    ef << "u v lam_d1" << (p.has_mu() ? " mu" : "") << "\n";
    for (std::size_t e = 0; e < p.edges.size(); e++){
        ef << p.edges[e].u << ' ' << p.edges[e].v << ' '
           << fmt_real(p.lam_d1[e]);
        if (p.has_mu()){ ef << ' ' << fmt_real(p.mu[e]); }
        ef << '\n';
    }
}

void write_solution(const std::filesystem::path& file,
    std::span<const double> x)
{
    std::ofstream out(file);
    if (!out){ throw ParseError(file.string() + ": cannot write"); }
    for (double v : x){ out << fmt_real(v) << '\n'; }
}

std::vector<double> read_solution(const std::filesystem::path& file)
{
    std::vector<double> x;
    for (std::size_t i = 0; const std::string& line : read_lines(file)){
        i++;
        const auto tok = split_ws(line);
        if (tok.empty()){ continue; }
        if (tok.size() != 1){ parse_fail(file, i, "expected one value"); }
        x.push_back(parse_real(tok[0], file, i));
    }
    return x;
}

void write_trace_csv(const std::filesystem::path& file,
    const ConvergenceTrace& trace)
{
    std::ofstream out(file);
    if (!out){ throw ParseError(file.string() + ": cannot write"); }
    out << "iter,objective,rel_change,seconds,recond\n";
    for (const TraceRecord& r : trace.records){
        out << r.iter << ',' << fmt_real(r.objective) << ','
            << fmt_real(r.rel_change) << ',' << fmt_real(r.seconds) << ','
            << (r.recond ? 1 : 0) << '\n';
    }
}

ConvergenceTrace read_trace_csv(const std::filesystem::path& file)
{
    const std::vector<std::string> lines = read_lines(file);
    if (lines.empty() || lines[0] != "iter,objective,rel_change,seconds,"
        "recond"){
        parse_fail(file, 1, "bad trace header");
    }
    ConvergenceTrace trace;
    for (std::size_t i = 1; i < lines.size(); i++){
        if (lines[i].empty()){ continue; }
        std::istringstream ss(lines[i]);
        std::string field;
        TraceRecord r{};
        std::getline(ss, field, ',');
        r.iter = std::stoull(field);
        std::getline(ss, field, ',');
        r.objective = std::stod(field);
        std::getline(ss, field, ',');
        r.rel_change = std::stod(field);
        std::getline(ss, field, ',');
        r.seconds = std::stod(field);
        std::getline(ss, field, ',');
        r.recond = field == "1";
        trace.records.push_back(r);
    }
    return trace;
}

} // namespace pgfb
