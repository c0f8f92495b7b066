#pragma once

#include <complex>
#include <string>

#include <gmpxx.h>

namespace superint::sym {

// Gaussian rational re + i*im.
class Coeff {
public:
    Coeff() = default;
    Coeff(long v) : re_(v) {}
    Coeff(mpq_class re) : re_(std::move(re)) { re_.canonicalize(); }
    Coeff(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {
        re_.canonicalize();
        im_.canonicalize();
    }

    static Coeff i() { return Coeff(mpq_class(0), mpq_class(1)); }
    static Coeff rational(long num, long den) { return Coeff(mpq_class(num, den)); }
    // accepts "p", "p/q", "-p/q"
    static Coeff parse_rational(const std::string& s);

    const mpq_class& re() const { return re_; }
    const mpq_class& im() const { return im_; }

    bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
    bool is_one() const { return re_ == 1 && sgn(im_) == 0; }
    bool is_real() const { return sgn(im_) == 0; }
    bool is_integer() const { return is_real() && re_.get_den() == 1; }

    Coeff conj() const { return Coeff(re_, -im_); }
    Coeff inverse() const;
    Coeff pow(long n) const;

    Coeff operator-() const { return Coeff(-re_, -im_); }
    Coeff& operator+=(const Coeff& o) {
        re_ += o.re_;
        im_ += o.im_;
        return *this;
    }
    Coeff& operator-=(const Coeff& o) {
        re_ -= o.re_;
        im_ -= o.im_;
        return *this;
    }
    Coeff& operator*=(const Coeff& o);
    Coeff& operator/=(const Coeff& o) { return *this *= o.inverse(); }

    friend Coeff operator+(Coeff a, const Coeff& b) { return a += b; }
    friend Coeff operator-(Coeff a, const Coeff& b) { return a -= b; }
    friend Coeff operator*(Coeff a, const Coeff& b) { return a *= b; }
    friend Coeff operator/(Coeff a, const Coeff& b) { return a /= b; }
    friend bool operator==(const Coeff& a, const Coeff& b) { return a.re_ == b.re_ && a.im_ == b.im_; }

    // total order used only for deterministic sorting
    int compare(const Coeff& o) const;

    std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }
    size_t hash() const;

    // "3/2", "-i", "(1/2 + 3*i)" style; used by printers
    std::string to_string() const;

private:
    mpq_class re_{0};
    mpq_class im_{0};
};

std::string rational_string(const mpq_class& q);

}  // namespace superint::sym
