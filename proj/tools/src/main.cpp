#include "commands.h"

int main(int argc, char** argv) { return adaptivetrend::cli::run(argc, argv); }
