#include "cli.h"

int main(int argc, char **argv) {
    return nplan::run_cli(argc, argv);
}
