#include "cli_app.hpp"

int main(int argc, char** argv) { return ssti::cli::run(argc, argv); }
