#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>

namespace pathcert {

using BigInt = boost::multiprecision::cpp_int;

/// A count that may be +infinity (represented by an empty optional).
struct Extended {
    std::optional<BigInt> value;

    static Extended infinity() { return Extended{}; }
    static Extended finite(BigInt v) { return Extended{std::move(v)}; }

    bool is_infinite() const { return !value.has_value(); }
    std::string str() const { return value ? value->str() : std::string("inf"); }

    friend bool operator==(const Extended& a, const Extended& b) { return a.value == b.value; }
    friend bool operator<(const Extended& a, const Extended& b) {
        if (!a.value) return false;
        if (!b.value) return true;
        return *a.value < *b.value;
    }
    friend bool operator<=(const Extended& a, const Extended& b) { return !(b < a); }
};

inline BigInt floor_div(const BigInt& a, const BigInt& b) {
    // Operands are non-negative everywhere this is used.
    return a / b;
}

}  // namespace pathcert
