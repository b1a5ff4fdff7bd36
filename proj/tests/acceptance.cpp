// One PASS/FAIL line per acceptance criterion; nonzero exit if any fails.
#include <iostream>

#include "h2r/acceptance.hpp"

int main() {
    bool ok = true;
    for (const auto& r : h2r::acceptance::run_all()) {
        std::cout << h2r::acceptance::format_line(r) << std::endl;
        ok = ok && r.pass;
    }
    return ok ? 0 : 1;
}
