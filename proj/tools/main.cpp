#include "cli.hpp"

int main(int argc, char** argv)
{
    return pgfb_cli::cli_main(argc, argv);
}
