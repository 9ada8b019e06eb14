#pragma once

#include <string>
#include <utility>

namespace toroidalkit {

// Outcome of one exact property check: how many instances were examined and the first failure.
struct CheckResult {
    bool pass = true;
    long long checked = 0;
    std::string counterexample;

    void fail(std::string what) {
        if (pass) counterexample = std::move(what);
        pass = false;
    }
    void merge(const CheckResult& o) {
        checked += o.checked;
        if (!o.pass) fail(o.counterexample);
    }
};

}  // namespace toroidalkit
