// Placeholder entry point; the full command set lands with the analysis
// modules.
#include <cstdio>

#include "weylab/half_wave_trace.hpp"
#include "weylab/pole_calculus.hpp"
#include "weylab/version.hpp"

int main() {
    std::printf("weylab %s\n", weylab::artifact_version);
    return 2;
}
