#include "replisure/commands.hpp"

int main(int argc, char** argv) { return replisure::cli::run(argc, argv); }
