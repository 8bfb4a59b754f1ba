#pragma once

#include <string>
#include <vector>

namespace pgather {

/// Output of a demonstration: a human-readable narrative and whether the
/// strawman's failure was actually exhibited.
struct DemoReport {
    std::string name;
    std::vector<std::string> narrative;
    bool failure_exhibited = false;
};

/// The strawman used by every demo: walk `steps` rounds leaving through
/// port ((incoming or 0) mod degree) + 1, then declare termination.
/// `ring`: T chosen to cover ring(3) terminates early on ring(T+2) while
/// observing exactly the same (degree, incoming port) sequence.
DemoReport demo_ring(std::size_t steps = 2);
/// `glued`: two copies of ring(5) joined at a node neither agent visits; the
/// agents terminate in different components.
DemoReport demo_glued();
/// `t3`: two terminated groups at the star centres of T3 stay apart forever.
DemoReport demo_t3(std::size_t rounds = 50);

DemoReport run_demo(const std::string& which);

}  // namespace pgather
