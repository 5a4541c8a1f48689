#include "tiletopo/linalg.hpp"

namespace tiletopo {

Vec to_double(const QVec& v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = to_double(v[i]);
  return Vec(std::move(r));
}

QVec to_rational(const Vec& v) {
  std::vector<Rational> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = Rational(v[i]);
  return QVec(std::move(r));
}

Word::Word(std::vector<unsigned> prefix, std::vector<unsigned> block, unsigned m)
    : prefix_(std::move(prefix)), block_(std::move(block)), m_(m) {
  if (m_ < 2) throw InvalidWordError("alphabet size must be at least 2");
  auto check = [this](const std::vector<unsigned>& s) {
    for (unsigned c : s) {
      if (c >= m_) {
        throw InvalidWordError("symbol " + std::to_string(c) + " outside alphabet of size " +
                               std::to_string(m_));
      }
    }
  };
  check(prefix_);
  check(block_);
}

Word Word::finite(std::vector<unsigned> symbols, unsigned alphabet_size) {
  return Word(std::move(symbols), {}, alphabet_size);
}

Word Word::periodic(std::vector<unsigned> prefix, std::vector<unsigned> block, unsigned alphabet_size) {
  if (block.empty()) throw InvalidWordError("repeating block must be nonempty");
  if (prefix.size() + block.size() > kMaxPeriodicLength) {
    throw InvalidWordError("eventually periodic word longer than " + std::to_string(kMaxPeriodicLength));
  }
  return Word(std::move(prefix), std::move(block), alphabet_size);
}

Word Word::concat(const Word& tail) const {
  if (!is_finite()) throw InvalidWordError("cannot append to an infinite word");
  if (tail.m_ != m_) throw InvalidWordError("alphabet mismatch in concatenation");
  std::vector<unsigned> p = prefix_;
  p.insert(p.end(), tail.prefix_.begin(), tail.prefix_.end());
  if (tail.is_finite()) return finite(std::move(p), m_);
  return periodic(std::move(p), tail.block_, m_);
}

namespace {

// sum_{n=1}^{|s|} s_n m^{-n}
Rational finite_value(const std::vector<unsigned>& s, unsigned m) {
  Rational acc(0);
  for (std::size_t k = s.size(); k-- > 0;) {
    acc = (acc + s[k]) / m;
  }
  return acc;
}

}  // namespace

Rational varphi_exact(const Word& w) {
  const unsigned m = w.alphabet_size();
  Rational value = finite_value(w.prefix(), m);
  if (w.is_finite()) return value;
  // block repeated forever after the prefix: B m^L / (m^L - 1) scaled by m^{-|prefix|}
  mpz_class mL, mP;
  mpz_ui_pow_ui(mL.get_mpz_t(), m, w.block().size());
  mpz_ui_pow_ui(mP.get_mpz_t(), m, w.prefix().size());
  Rational block = finite_value(w.block(), m);
  Rational tail = block * Rational(mL) / Rational(mL - 1) / Rational(mP);
  value += tail;
  value.canonicalize();
  return value;
}

double varphi(const Word& w) { return to_double(varphi_exact(w)); }

}  // namespace tiletopo
