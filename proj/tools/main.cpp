// Apache License, Version 2.0, refer to LICENSE.txt

#include "ideal/cli.hpp"

int main(int argc, char** argv) { return ideal::cli_main(argc, argv); }
