#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rtpta/oracle.hpp"
#include "rtpta/synthesis.hpp"

namespace rtpta::cli {

enum ExitCode : int {
    ok = 0,
    unschedulable = 1,
    inconclusive = 2,  // depth bound exceeded
    usage = 64,
    model_error = 65,
    disagreement = 70,  // oracle and symbolic verdicts differ
};

struct CheckReport {
    oracle::Verdict oracle;
    synthesis::Verdict symbolic = synthesis::Verdict::schedulable;
    std::size_t depth = 0;

    [[nodiscard]] bool agree() const;
    [[nodiscard]] int exit_code() const;
};

// Oracle and symbolic verdicts at a full assignment. `net` replaces the
// network built from spec (used to check that a faulty model is caught).
CheckReport check_point(const rts::ComponentSpec &spec, const geometry::ParamPoint &pt,
                        std::optional<std::size_t> depth = {}, const psa::PsaNetwork *net = nullptr);

// `name=value,...` with exact rationals.
geometry::ParamPoint parse_assignment(const std::string &text);
// `name=lo..hi,...`
synthesis::Box parse_box(const std::string &text);

// Runs the command line (args exclude the program name); returns the exit
// code.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace rtpta::cli
