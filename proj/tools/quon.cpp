#include "quon/cli.hpp"

int main(int argc, char **argv) {
    return quon::run_cli(argc, argv);
}
