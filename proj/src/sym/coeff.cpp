#include "superint/sym/coeff.hpp"

#include <functional>
#include <stdexcept>

namespace superint::sym {

Coeff Coeff::parse_rational(const std::string& s) {
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
    q.canonicalize();
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
    return Coeff(q);
}

Coeff& Coeff::operator*=(const Coeff& o) {
    if (sgn(im_) == 0 && sgn(o.im_) == 0) {
        re_ *= o.re_;
        return *this;
    }
    mpq_class r = re_ * o.re_ - im_ * o.im_;
    mpq_class i = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    im_ = std::move(i);
    return *this;
}

Coeff Coeff::inverse() const {
    if (is_zero()) throw std::domain_error("division by zero coefficient");
    if (sgn(im_) == 0) return Coeff(mpq_class(1) / re_);
    mpq_class n = re_ * re_ + im_ * im_;
    return Coeff(re_ / n, -im_ / n);
}

Coeff Coeff::pow(long n) const {
    if (n < 0) return inverse().pow(-n);
    Coeff r(1), b = *this;
    while (n) {
        if (n & 1) r *= b;
        n >>= 1;
        if (n) b *= b;
    }
    return r;
}

int Coeff::compare(const Coeff& o) const {
    int c = cmp(re_, o.re_);
    if (c) return c < 0 ? -1 : 1;
    c = cmp(im_, o.im_);
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

size_t Coeff::hash() const {
    std::hash<std::string> h;
    return h(re_.get_str()) * 31 + h(im_.get_str());
}

std::string rational_string(const mpq_class& q) { return q.get_str(); }

std::string Coeff::to_string() const {
    if (sgn(im_) == 0) return re_.get_str();
    std::string ims;
    if (im_ == 1)
        ims = "i";
    else if (im_ == -1)
        ims = "-i";
    else
        ims = im_.get_str() + "*i";
    if (sgn(re_) == 0) return ims;
    return "(" + re_.get_str() + (sgn(im_) > 0 ? " + " : " - ") +
           (sgn(im_) > 0 ? ims : ims.substr(1)) + ")";
}

}  // namespace superint::sym
