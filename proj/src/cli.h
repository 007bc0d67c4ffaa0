#ifndef NPLAN_CLI_H
#define NPLAN_CLI_H

namespace nplan {

// Entry point behind the planner binary: subcommands solve, validate,
// analyze, decide, gen. Returns the process exit code: 0 success
// (plan found / plan valid / relaxed-solvable), 1 negative outcome
// (no plan / invalid plan / relaxed-unsolvable), 2 usage or input errors.
int run_cli(int argc, char **argv);

}  // namespace nplan

#endif
