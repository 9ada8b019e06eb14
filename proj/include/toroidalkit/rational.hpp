#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <limits>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace toroidalkit {

// Exact rational number, always in lowest terms with a positive denominator.
// Values whose numerator and denominator fit in int64 are kept inline; larger
// values spill to a GMP rational. The spill is transparent and results are
// demoted back to the inline form whenever they fit, so two equal values always
// share a representation.
class Rational {
public:
    Rational() = default;
    Rational(std::int64_t n) : num_(n) {}  // NOLINT(google-explicit-constructor)
    Rational(int n) : num_(n) {}           // NOLINT(google-explicit-constructor)
    Rational(std::int64_t n, std::int64_t d) { assign_wide(n, d); }

    explicit Rational(const mpq_class& q) { assign_big(q); }

    Rational(const Rational& o) : num_(o.num_), den_(o.den_) {
        if (o.big_) big_ = std::make_unique<mpq_class>(*o.big_);
    }
    Rational(Rational&&) noexcept = default;
    Rational& operator=(const Rational& o) {
        if (this != &o) {
            num_ = o.num_;
            den_ = o.den_;
            big_ = o.big_ ? std::make_unique<mpq_class>(*o.big_) : nullptr;
        }
        return *this;
    }
    Rational& operator=(Rational&&) noexcept = default;

    // Accepts "p", "-p", "p/q" with optional surrounding whitespace.
    static Rational parse(std::string_view text) {
        std::string s;
        for (char ch : text)
            if (ch != ' ' && ch != '\t') s.push_back(ch);
        if (s.empty()) throw std::invalid_argument("empty rational literal");
        auto slash = s.find('/');
        auto valid_int = [](const std::string& t) {
            std::size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
            if (i == t.size()) return false;
            for (; i < t.size(); ++i)
                if (t[i] < '0' || t[i] > '9') return false;
            return true;
        };
        std::string ns = s.substr(0, slash);
        std::string ds = slash == std::string::npos ? "1" : s.substr(slash + 1);
        if (!valid_int(ns) || !valid_int(ds) || ds.find('-') != std::string::npos)
            throw std::invalid_argument("malformed rational literal '" + std::string(text) + "'");
        if (ns[0] == '+') ns.erase(0, 1);
        if (ds[0] == '+') ds.erase(0, 1);
        mpz_class n(ns, 10), d(ds, 10);
        if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
        mpq_class q(n, d);
        q.canonicalize();
        return Rational(q);
    }

    bool is_zero() const { return !big_ && num_ == 0; }
    bool is_one() const { return !big_ && num_ == 1 && den_ == 1; }
    bool is_integer() const { return big_ ? big_->get_den() == 1 : den_ == 1; }
    int sign() const {
        if (big_) return sgn(*big_);
        return (num_ > 0) - (num_ < 0);
    }

    mpq_class to_mpq() const {
        if (big_) return *big_;
        mpq_class q(to_mpz(num_), to_mpz(den_));
        return q;
    }
    mpz_class numerator() const { return big_ ? mpz_class(big_->get_num()) : to_mpz(num_); }
    mpz_class denominator() const { return big_ ? mpz_class(big_->get_den()) : to_mpz(den_); }

    // Integer value; throws unless the value is integral and fits in int64.
    std::int64_t to_int64() const {
        if (big_ || den_ != 1) throw std::domain_error("rational " + str() + " is not a machine integer");
        return num_;
    }

    std::string str() const {
        if (big_) return big_->get_str();
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    Rational operator-() const {
        if (!big_ && num_ != std::numeric_limits<std::int64_t>::min()) return from_reduced(-num_, den_);
        mpq_class q = -to_mpq();
        return Rational(q);
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        if (!a.big_ && !b.big_) {
            if (a.den_ == b.den_) return wide(static_cast<Wide>(a.num_) + b.num_, a.den_);
            return wide(static_cast<Wide>(a.num_) * b.den_ + static_cast<Wide>(b.num_) * a.den_,
                        static_cast<Wide>(a.den_) * b.den_);
        }
        mpq_class q = a.to_mpq() + b.to_mpq();
        return Rational(q);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        if (!a.big_ && !b.big_) {
            if (a.den_ == b.den_) return wide(static_cast<Wide>(a.num_) - b.num_, a.den_);
            return wide(static_cast<Wide>(a.num_) * b.den_ - static_cast<Wide>(b.num_) * a.den_,
                        static_cast<Wide>(a.den_) * b.den_);
        }
        mpq_class q = a.to_mpq() - b.to_mpq();
        return Rational(q);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        if (!a.big_ && !b.big_) {
            if (a.num_ == 0 || b.num_ == 0) return Rational();
            if (a.den_ == 1 && b.den_ == 1) return wide(static_cast<Wide>(a.num_) * b.num_, 1);
            return wide(static_cast<Wide>(a.num_) * b.num_, static_cast<Wide>(a.den_) * b.den_);
        }
        mpq_class q = a.to_mpq() * b.to_mpq();
        return Rational(q);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.is_zero()) throw std::domain_error("division by zero rational");
        if (!a.big_ && !b.big_)
            return wide(static_cast<Wide>(a.num_) * b.den_, static_cast<Wide>(a.den_) * b.num_);
        mpq_class q = a.to_mpq() / b.to_mpq();
        return Rational(q);
    }
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
        if (a.big_ && b.big_) return *a.big_ == *b.big_;
        return false;  // canonical demotion: a small and a big value never coincide
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        if (!a.big_ && !b.big_) {
            Wide l = static_cast<Wide>(a.num_) * b.den_;
            Wide r = static_cast<Wide>(b.num_) * a.den_;
            return l <=> r;
        }
        int c = cmp(a.to_mpq(), b.to_mpq());
        return c <=> 0;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    using Wide = __int128;
    using UWide = unsigned __int128;

    static mpz_class to_mpz(std::int64_t v) {
        mpz_class z;
        mpz_set_si(z.get_mpz_t(), static_cast<long>(v));
        return z;
    }
    static mpz_class to_mpz_wide(Wide v) {
        bool neg = v < 0;
        UWide u = neg ? static_cast<UWide>(-(v + 1)) + 1 : static_cast<UWide>(v);
        mpz_class z(static_cast<unsigned long>(static_cast<std::uint64_t>(u >> 64)));
        z <<= 64;
        z += mpz_class(static_cast<unsigned long>(static_cast<std::uint64_t>(u)));
        return neg ? mpz_class(-z) : z;
    }
    static UWide ugcd(UWide a, UWide b) {
        while (b != 0) {
            UWide t = a % b;
            a = b;
            b = t;
        }
        return a;
    }
    static bool fits(Wide v) {
        return v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max();
    }
    static Rational from_reduced(std::int64_t n, std::int64_t d) {
        Rational r;
        r.num_ = n;
        r.den_ = d;
        return r;
    }
    static Rational wide(Wide n, Wide d) {
        Rational r;
        r.assign_wide(n, d);
        return r;
    }

    void assign_wide(Wide n, Wide d) {
        if (d == 0) throw std::domain_error("zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        if (n == 0) {
            num_ = 0;
            den_ = 1;
            big_.reset();
            return;
        }
        UWide un = n < 0 ? static_cast<UWide>(-n) : static_cast<UWide>(n);
        UWide g = ugcd(un, static_cast<UWide>(d));
        if (g != 1) {
            n /= static_cast<Wide>(g);
            d /= static_cast<Wide>(g);
        }
        if (fits(n) && fits(d)) {
            num_ = static_cast<std::int64_t>(n);
            den_ = static_cast<std::int64_t>(d);
            big_.reset();
            return;
        }
        mpq_class q(to_mpz_wide(n), to_mpz_wide(d));
        big_ = std::make_unique<mpq_class>(std::move(q));
        num_ = 0;
        den_ = 1;
    }

    void assign_big(const mpq_class& q) {
        const mpz_class& n = q.get_num();
        const mpz_class& d = q.get_den();
        if (n.fits_slong_p() && d.fits_slong_p()) {
            num_ = n.get_si();
            den_ = d.get_si();
            big_.reset();
            return;
        }
        big_ = std::make_unique<mpq_class>(q);
        num_ = 0;
        den_ = 1;
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
    std::unique_ptr<mpq_class> big_;
};

}  // namespace toroidalkit
