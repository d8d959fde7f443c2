#include "turnsolve/rational.hpp"

#include <cctype>

namespace turnsolve {

std::optional<Rat> rat_parse(const std::string& text) {
  if (text.empty()) return std::nullopt;

  auto slash = text.find('/');
  if (slash != std::string::npos) {
    mpq_class q;
    if (q.set_str(text, 10) != 0) return std::nullopt;
    if (q.get_den() == 0) return std::nullopt;
    q.canonicalize();
    return Rat(q);
  }

  std::string digits;
  digits.reserve(text.size());
  bool negative = false;
  std::size_t i = 0;
  if (text[i] == '+' || text[i] == '-') {
    negative = text[i] == '-';
    ++i;
  }
  long frac_digits = -1;
  bool any_digit = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c == '.') {
      if (frac_digits >= 0) return std::nullopt;
      frac_digits = 0;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    digits.push_back(c);
    any_digit = true;
    if (frac_digits >= 0) ++frac_digits;
  }
  if (!any_digit) return std::nullopt;

  mpz_class num(digits, 10);
  mpz_class den(1);
  for (long k = 0; k < std::max(frac_digits, 0L); ++k) den *= 10;
  Rat result(num, den);
  result.canonicalize();
  if (negative) result = -result;
  return result;
}

std::string rat_str(const Rat& value) {
  mpz_class num = value.get_num();
  mpz_class den = value.get_den();
  if (den == 1) return num.get_str();

  // Exact decimal expansion exists iff den = 2^a * 5^b.
  mpz_class d = den;
  int twos = 0, fives = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++twos;
  }
  while (d % 5 == 0) {
    d /= 5;
    ++fives;
  }
  if (d != 1) return num.get_str() + "/" + den.get_str();

  int shift = std::max(twos, fives);
  mpz_class scaled = num;
  for (int k = 0; k < shift - twos; ++k) scaled *= 2;
  for (int k = 0; k < shift - fives; ++k) scaled *= 5;

  bool negative = scaled < 0;
  mpz_class mag = negative ? mpz_class(-scaled) : scaled;
  std::string s = mag.get_str();
  if (static_cast<int>(s.size()) <= shift) s.insert(0, shift + 1 - s.size(), '0');
  s.insert(s.size() - shift, ".");
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return (negative ? "-" : "") + s;
}

}  // namespace turnsolve
