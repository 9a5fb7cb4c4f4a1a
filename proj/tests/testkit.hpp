// Minimal check/report harness shared by the test binaries.
// Checks never abort the run; main() returns the failure count.

#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

namespace testkit {

inline int g_failures = 0;
inline int g_checks = 0;

inline void check(bool cond, const std::string& what) {
    ++g_checks;
    if (!cond) {
        ++g_failures;
        std::printf("[FAIL] %s\n", what.c_str());
    }
}

inline void check_close(double got, double want, double tol, const std::string& what) {
    ++g_checks;
    if (!(std::fabs(got - want) <= tol)) {
        ++g_failures;
        std::printf("[FAIL] %s: got %.17g want %.17g (tol %.3g)\n", what.c_str(), got, want, tol);
    }
}

inline void check_eq_u64(unsigned long long got, unsigned long long want, const std::string& what) {
    ++g_checks;
    if (got != want) {
        ++g_failures;
        std::printf("[FAIL] %s: got %llu want %llu\n", what.c_str(), got, want);
    }
}

template <typename F>
void check_throws(F&& f, const std::string& what) {
    ++g_checks;
    bool threw = false;
    try {
        f();
    } catch (...) {
        threw = true;
    }
    if (!threw) {
        ++g_failures;
        std::printf("[FAIL] %s: expected an exception\n", what.c_str());
    }
}

inline int run(const std::vector<std::pair<std::string, std::function<void()>>>& cases) {
    for (const auto& [name, fn] : cases) {
        int before = g_failures;
        std::printf("-- %s\n", name.c_str());
        try {
            fn();
        } catch (const std::exception& e) {
            ++g_failures;
            std::printf("[FAIL] %s: unexpected exception: %s\n", name.c_str(), e.what());
        }
        if (g_failures == before) std::printf("   ok\n");
    }
    std::printf("%d checks, %d failures\n", g_checks, g_failures);
    return g_failures == 0 ? 0 : 1;
}

} // namespace testkit
