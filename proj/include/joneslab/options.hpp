#pragma once

namespace joneslab {

enum class Engine { Skein, Subgraph, Fast };

struct EngineOptions {
    Engine engine = Engine::Fast;
    int naive_limit = 22;   // largest crossing count for the exponential engines
    int frontier_cap = 20;  // largest frontier width for the fast engine
    int threads = 1;
};

}  // namespace joneslab
