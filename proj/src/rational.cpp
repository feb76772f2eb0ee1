#include "jetnorm/rational.hpp"

#include <cctype>

namespace jetnorm {

namespace {

bool is_integer_token(const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    }
    return true;
}

} // namespace

Rational parse_rational(const std::string& text) {
    const auto slash = text.find('/');
    std::string num = text.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
    if (!is_integer_token(num) || !is_integer_token(den)) {
        throw StructuralError("not a rational \"p/q\" string: \"" + text + "\"");
    }
    if (num[0] == '+') num.erase(0, 1); // gmp rejects an explicit plus
    if (den[0] == '+') den.erase(0, 1);
    Rational q;
    if (mpq_set_str(q.get_mpq_t(), (num + "/" + den).c_str(), 10) != 0) {
        throw StructuralError("not a rational \"p/q\" string: \"" + text + "\"");
    }
    if (q.get_den() == 0) throw StructuralError("zero denominator in \"" + text + "\"");
    q.canonicalize();
    return q;
}

std::string format_rational(const Rational& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Integer factorial(int n) {
    Integer r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

} // namespace jetnorm
