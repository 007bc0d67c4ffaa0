#ifndef NPLAN_RATIONAL_H
#define NPLAN_RATIONAL_H

#include <gmpxx.h>

#include <cstddef>
#include <iosfwd>
#include <string>

namespace nplan {

/*
  Exact rational number, kept in canonical form (reduced, denominator > 0).
  All planner arithmetic uses this type: the relaxation machinery depends on
  exact strict-vs-nonstrict comparisons, which floating point would corrupt.
*/
class Rational {
public:
    Rational() : value(0) {}
    Rational(long num) : value(num, 1) {}
    Rational(long num, long den);
    explicit Rational(const mpq_class &q) : value(q) {
        value.canonicalize();
    }

    // Parses "42", "-3.5", "0.25", "7/2" into an exact value.
    static Rational parse(const std::string &text);

    Rational operator-() const {
        return Rational(mpq_class(-value), NoCanon());
    }
    Rational operator+(const Rational &o) const {
        return Rational(mpq_class(value + o.value), NoCanon());
    }
    Rational operator-(const Rational &o) const {
        return Rational(mpq_class(value - o.value), NoCanon());
    }
    Rational operator*(const Rational &o) const {
        return Rational(mpq_class(value * o.value), NoCanon());
    }
    // Caller must rule out division by zero first; expression evaluation
    // turns a zero divisor into "undefined" before ever dividing.
    Rational operator/(const Rational &o) const;

    Rational &operator+=(const Rational &o) {
        value += o.value;
        return *this;
    }
    Rational &operator-=(const Rational &o) {
        value -= o.value;
        return *this;
    }
    Rational &operator*=(const Rational &o) {
        value *= o.value;
        return *this;
    }

    bool operator==(const Rational &o) const { return value == o.value; }
    bool operator!=(const Rational &o) const { return value != o.value; }
    bool operator<(const Rational &o) const { return value < o.value; }
    bool operator<=(const Rational &o) const { return value <= o.value; }
    bool operator>(const Rational &o) const { return value > o.value; }
    bool operator>=(const Rational &o) const { return value >= o.value; }

    int sign() const { return mpq_sgn(value.get_mpq_t()); }
    bool is_zero() const { return sign() == 0; }
    bool is_integer() const { return value.get_den() == 1; }

    // "3", "-7/2"; exact, round-trips through parse().
    std::string to_string() const;
    double to_double() const { return value.get_d(); }
    std::size_t hash() const;

    const mpq_class &raw() const { return value; }

private:
    struct NoCanon {};
    Rational(mpq_class q, NoCanon) : value(std::move(q)) {}

    mpq_class value;
};

std::ostream &operator<<(std::ostream &os, const Rational &r);

}  // namespace nplan

#endif
