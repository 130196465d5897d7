#pragma once

#include <cmath>

namespace latdef {

// Kahan-Babuska-Neumaier compensated accumulator. Error stays near one ulp of
// the true sum regardless of term count or ordering, which the series engines
// rely on when they add 1e7+ terms against 1e-9 identity tolerances.
template <class T>
struct Kahan {
    T sum{};
    T comp{};

    void add(T x) {
        const T t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }

    void merge(const Kahan& other) {
        add(other.sum);
        comp += other.comp;
    }

    T value() const { return sum + comp; }
};

}  // namespace latdef
