#include <gtest/gtest.h>

#include "alphaeta/gf2.hpp"
#include "alphaeta/keystream.hpp"
#include "alphaeta/rng.hpp"

using namespace alphaeta;

namespace {

LfsrConfig lfsr(std::size_t L, const std::string& hex) {
  LfsrConfig c;
  c.length = L;
  c.taps = maximal_taps(L);
  c.seed = LfsrConfig::seed_from_hex(hex, L);
  return c;
}

BitVector random_vector(std::size_t n, Rng& rng) {
  BitVector v(n);
  for (std::size_t i = 0; i < n; ++i) v.set(i, random_bit(rng));
  return v;
}

}  // namespace

TEST(Lfsr, HandComputedSequence) {
  auto bits = lfsr_stream(lfsr(4, "8"), 16);
  std::vector<std::uint8_t> expect = {1, 0, 0, 0, 1, 1, 1, 1, 0, 1, 0, 1, 1, 0, 0, 1};
  EXPECT_EQ(bits, expect);
}

TEST(Lfsr, TapTableIsMaximalLength) {
  for (std::size_t L = 2; L <= 20; ++L) {
    LfsrConfig c = lfsr(L, "1");
    LfsrGenerator gen(c);
    std::vector<std::uint8_t> window(L);
    for (std::size_t i = 0; i < L; ++i) window[i] = gen.next_bit();
    const std::vector<std::uint8_t> start = window;
    std::size_t period = 0;
    std::size_t head = 0;
    do {
      window[head] = gen.next_bit();
      head = (head + 1) % L;
      ++period;
      bool same = true;
      for (std::size_t i = 0; i < L && same; ++i) same = window[(head + i) % L] == start[i];
      if (same) break;
    } while (period <= (std::size_t{1} << L));
    EXPECT_EQ(period, (std::size_t{1} << L) - 1) << "L = " << L;
  }
}

TEST(Lfsr, SeedHex) {
  auto s = LfsrConfig::seed_from_hex("0x3", 4);
  EXPECT_EQ(s.to_string(), "0011");
  EXPECT_EQ(LfsrConfig::seed_to_hex(LfsrConfig::seed_from_hex("9a3f1", 20)), "9a3f1");
  EXPECT_EQ(LfsrConfig::seed_to_hex(LfsrConfig::seed_from_hex("15", 6)), "15");
  EXPECT_THROW(LfsrConfig::seed_from_hex("1ff", 8), InputError);
  EXPECT_THROW(LfsrConfig::seed_from_hex("xy", 8), InputError);
}

TEST(Lfsr, Validation) {
  LfsrConfig c = lfsr(8, "0");
  EXPECT_THROW(c.validate(), InputError);  // zero seed
  c = lfsr(8, "1");
  c.taps = {7, 3};
  EXPECT_THROW(c.validate(), InputError);  // no tap at L
  c.taps = {9, 8};
  EXPECT_THROW(c.validate(), InputError);
  EXPECT_THROW(maximal_taps(40), InputError);
}

TEST(Lfsr, JsonRoundTrip) {
  auto c = lfsr(16, "beef");
  auto back = LfsrConfig::from_json(c.to_json());
  EXPECT_EQ(back.seed, c.seed);
  EXPECT_EQ(back.taps, c.taps);
}

TEST(Keystream, ChopSymbolsMsbFirst) {
  auto out = chop_symbols({1, 0, 1, 1, 0, 1, 0}, 3);
  ASSERT_EQ(out.symbols.size(), 2u);
  EXPECT_EQ(out.symbols[0], (KeystreamSymbol{5, 1}));
  EXPECT_EQ(out.symbols[1], (KeystreamSymbol{5, 2}));
  EXPECT_EQ(out.dropped_bits, 1u);
  EXPECT_THROW(chop_symbols({1}, 0), InputError);
}

TEST(Keystream, ExpandIdentity) {
  auto spec = ExpansionSpec::identity(2);
  auto z = expand_keystream({1, 3}, spec);
  EXPECT_EQ(z, (std::vector<std::uint32_t>{1, 1, 3, 3}));
  spec.functions.pop_back();
  EXPECT_THROW(expand_keystream({1}, spec), InputError);
  auto bad = ExpansionSpec::identity(2);
  bad.functions[0][0] = 7;
  EXPECT_THROW(expand_keystream({0}, bad), InputError);
}

TEST(Keystream, ExpandTables) {
  ExpansionSpec spec{1, {{1, 0}}};  // bit complement
  EXPECT_EQ(expand_keystream({0, 1, 1}, spec), (std::vector<std::uint32_t>{1, 0, 0}));
}

TEST(Keystream, LinearFormsMatchSimulation) {
  Rng rng = make_rng(1, "test.forms");
  for (std::size_t L : {5, 12, 16, 20}) {
    LfsrConfig c = lfsr(L, "1");
    LfsrLinearForms forms(c);
    for (int trial = 0; trial < 5; ++trial) {
      do c.seed = random_vector(L, rng);
      while (!c.seed.any());
      const unsigned m = 4;
      auto z = lfsr_symbols(c, 30, m);
      for (std::size_t i = 0; i < z.size(); ++i) EXPECT_EQ(evaluate_symbol(forms.symbol(i + 1, m), c.seed), z[i]);
    }
  }
  EXPECT_EQ(keystream_linear_forms(lfsr(4, "1"), 1, 4)[2], BitVector::unit(4, 2));
}

TEST(Gf2, SolveRecoversPlantedSolution) {
  Rng rng = make_rng(2, "test.gf2");
  const std::size_t n = 40;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<BitVector> rows;
    while (rows.size() < n + 5) rows.push_back(random_vector(n, rng));
    Gf2System sys(rows, n);
    if (!sys.full_rank()) continue;
    BitVector s = random_vector(n, rng);
    BitVector rhs(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) rhs.set(i, rows[i].dot(s));
    auto got = sys.solve(rhs);
    ASSERT_TRUE(got.has_value());
    EXPECT_EQ(*got, s);
    rhs.flip(0);
    EXPECT_FALSE(sys.solve(rhs).has_value());  // overdetermined, now inconsistent
  }
}

TEST(Gf2, RankOfDependentRows) {
  auto a = BitVector::from_string("1100");
  auto b = BitVector::from_string("0110");
  EXPECT_EQ(gf2_rank({a, b, a ^ b}, 4), 2u);
  Gf2System sys({a, b}, 4);
  EXPECT_FALSE(sys.full_rank());
  EXPECT_THROW(sys.solve(BitVector(2)), InputError);
}

TEST(Gf2, BitVectorBasics) {
  auto v = BitVector::from_string("10110");
  EXPECT_EQ(v.to_string(), "10110");
  EXPECT_TRUE(v.dot(BitVector::from_string("10000")));
  EXPECT_FALSE(v.dot(BitVector::from_string("10100")));
  BitVector big(130);
  big.set(129, true);
  EXPECT_TRUE(big.any());
  big.flip(129);
  EXPECT_FALSE(big.any());
}
