#pragma once

#include <gmpxx.h>

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace algrest {

// Exact rational scalar used everywhere in the engine. mpq_class keeps values
// canonical (lowest terms, positive denominator) as long as inputs are
// canonical, so the helpers below canonicalize at every construction site.
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

// Accepts "p" or "p/q" with an optional leading sign.
Rat rat_from_string(const std::string& text);

std::string rat_str(const Rat& r);

inline double rat_double(const Rat& r) { return r.get_d(); }

inline int rat_sign(const Rat& r) { return sgn(r); }

// Extended non-negative integer: a plain value or infinity. Used for
// vanishing orders and tangency orders.
struct ExtInt {
    bool infinite = false;
    long value = 0;

    static ExtInt inf() { return ExtInt{true, 0}; }
    static ExtInt of(long v) { return ExtInt{false, v}; }

    bool operator==(const ExtInt& o) const {
        return infinite == o.infinite && (infinite || value == o.value);
    }
    bool operator!=(const ExtInt& o) const { return !(*this == o); }
    bool operator<(const ExtInt& o) const {
        if (infinite) return false;
        if (o.infinite) return true;
        return value < o.value;
    }

    // `ascii` selects the machine spelling ("inf") over the display one.
    std::string str(bool ascii = false) const {
        if (infinite) return ascii ? "inf" : "∞";
        return std::to_string(value);
    }
};

inline ExtInt min(const ExtInt& a, const ExtInt& b) { return a < b ? a : b; }
inline ExtInt max(const ExtInt& a, const ExtInt& b) { return a < b ? b : a; }

}  // namespace algrest
