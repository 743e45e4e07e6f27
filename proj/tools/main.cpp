#include "cli.hpp"

int main(int argc, char** argv) { return oedcli::dispatch(argc, argv); }
