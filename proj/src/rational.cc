#include "rational.h"

#include <cassert>
#include <cstdlib>
#include <ostream>
#include <stdexcept>

using namespace std;

namespace nplan {

Rational::Rational(long num, long den) {
    if (den == 0)
        throw invalid_argument("Rational: zero denominator");
    value = mpq_class(num, den);
    value.canonicalize();
}

Rational Rational::operator/(const Rational &o) const {
    assert(!o.is_zero());
    return Rational(mpq_class(value / o.value), NoCanon());
}

static size_t hash_mpz(const __mpz_struct *z) {
    int n = z->_mp_size;
    size_t h = static_cast<size_t>(n);
    int len = abs(n);
    const mp_limb_t *limbs = mpz_limbs_read(z);
    for (int i = 0; i < len; ++i)
        h = h * 1099511628211ULL ^ static_cast<size_t>(limbs[i]);
    return h;
}

size_t Rational::hash() const {
    size_t h = hash_mpz(mpq_numref(value.get_mpq_t()));
    h = h * 31 + hash_mpz(mpq_denref(value.get_mpq_t()));
    return h;
}

Rational Rational::parse(const string &text) {
    if (text.empty())
        throw invalid_argument("Rational::parse: empty string");
    size_t dot = text.find('.');
    if (dot == string::npos) {
        // Integer or explicit fraction; GMP accepts both ("42", "7/2").
        mpq_class q;
        if (q.set_str(text, 10) != 0)
            throw invalid_argument("Rational::parse: bad number: " + text);
        if (q.get_den() == 0)
            throw invalid_argument("Rational::parse: zero denominator: " + text);
        q.canonicalize();
        return Rational(q);
    }
    string digits = text.substr(0, dot) + text.substr(dot + 1);
    size_t frac_len = text.size() - dot - 1;
    if (frac_len == 0 || digits.empty() || digits == "-" || digits == "+")
        throw invalid_argument("Rational::parse: bad decimal: " + text);
    mpz_class num;
    if (num.set_str(digits, 10) != 0)
        throw invalid_argument("Rational::parse: bad decimal: " + text);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_len);
    mpq_class q(num, den);
    q.canonicalize();
    return Rational(q);
}

string Rational::to_string() const {
    return value.get_str();
}

ostream &operator<<(ostream &os, const Rational &r) {
    return os << r.to_string();
}

}  // namespace nplan
