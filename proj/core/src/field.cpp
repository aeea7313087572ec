#include "dagiso/field.hpp"

#include <cctype>
#include <string>

namespace dagiso {

bool is_prime(std::uint64_t q) noexcept {
  if (q < 2) return false;
  if (q % 2 == 0) return q == 2;
  for (std::uint64_t d = 3; d * d <= q; d += 2)
    if (q % d == 0) return false;
  return true;
}

PrimeField::PrimeField(std::uint64_t q) : q_(q) {
  if (q <= 2 || q >= (1ULL << 32) || !is_prime(q))
    throw ParameterError("field modulus must be an odd prime below 2^32, got " + std::to_string(q));
}

PrimeField::Element PrimeField::inv(Element a) const {
  if (a == 0) throw SingularPivotError("inverse of zero in F_" + std::to_string(q_));
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = static_cast<std::int64_t>(q_), new_r = static_cast<std::int64_t>(a);
  while (new_r != 0) {
    const std::int64_t quot = r / new_r;
    t = std::exchange(new_t, t - quot * new_t);
    r = std::exchange(new_r, r - quot * new_r);
  }
  return from_int(t);
}

RationalField::Element RationalField::inv(const Element& a) const {
  if (sgn(a) == 0) throw SingularPivotError("inverse of zero rational");
  return Element(1) / a;
}

mpq_class parse_rational(const std::string& text) {
  if (text.empty()) throw InputError("empty rational literal");
  if (text.find('/') != std::string::npos) {
    mpq_class q;
    if (q.set_str(text, 10) != 0) throw InputError("bad rational literal: " + text);
    if (sgn(q.get_den()) == 0) throw InputError("zero denominator: " + text);
    q.canonicalize();
    return q;
  }
  // Decimal with optional fraction and exponent, parsed exactly.
  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '+' || text[pos] == '-') negative = text[pos++] == '-';
  std::string digits;
  long exponent = 0;
  bool seen_digit = false;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
    digits += text[pos++];
    seen_digit = true;
  }
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      digits += text[pos++];
      --exponent;
      seen_digit = true;
    }
  }
  if (!seen_digit) throw InputError("bad numeric literal: " + text);
  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    ++pos;
    std::size_t used = 0;
    try {
      exponent += std::stol(text.substr(pos), &used);
    } catch (const std::exception&) {
      throw InputError("bad exponent in literal: " + text);
    }
    pos += used;
  }
  if (pos != text.size()) throw InputError("trailing characters in literal: " + text);
  mpz_class mantissa(digits, 10);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  mpq_class out = exponent < 0 ? mpq_class(mantissa, scale) : mpq_class(mantissa * scale);
  out.canonicalize();
  return negative ? mpq_class(-out) : out;
}

}  // namespace dagiso
