#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "roughvol/word_calculus.hpp"

using namespace roughvol;

namespace {

std::vector<std::string> letters_of(const std::vector<Word>& ws) {
    std::vector<std::string> out;
    for (const Word& w : ws) out.push_back(w.letters);
    return out;
}

const IntegrandTerm* find_term(const std::vector<IntegrandTerm>& terms,
                               const std::vector<std::vector<int>>& factors,
                               const std::vector<int>& alpha) {
    for (const IntegrandTerm& t : terms)
        if (t.psi.factors == factors && t.alpha == alpha) return &t;
    return nullptr;
}

} // namespace

TEST_CASE("word validation and weights") {
    CHECK_THROWS(Word("IK"));
    CHECK(Word("IJI").weighted_length() == 4);
    CHECK(Word("JJ").weighted_length() == 4);
    CHECK(Word("JJ").size() == 2);
}

TEST_CASE("word counts follow the Fibonacci recursion") {
    const int want[] = {1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233};
    for (int N = 1; N <= 12; ++N) {
        CAPTURE(N);
        CHECK(static_cast<int>(enumerate_words(N).size()) == want[N - 1]);
    }
    CHECK_THROWS(enumerate_words(0));
}

TEST_CASE("exact enumeration at small orders") {
    CHECK(letters_of(enumerate_words(1)) == std::vector<std::string>{"I"});
    CHECK(letters_of(enumerate_words(2)) == std::vector<std::string>{"II", "J"});
    CHECK(letters_of(enumerate_words(3)) ==
          std::vector<std::string>{"III", "IJ", "JI"});
    CHECK(letters_of(enumerate_words(4)) ==
          std::vector<std::string>{"IIII", "IIJ", "IJI", "JII", "JJ"});
    // every weighted length is correct and the order is lexicographic
    for (int N = 1; N <= 9; ++N) {
        auto ws = enumerate_words(N);
        for (const Word& w : ws) CHECK(w.weighted_length() == N);
        auto names = letters_of(ws);
        CHECK(std::is_sorted(names.begin(), names.end()));
    }
}

TEST_CASE("triviality is exactly the trailing-I rule") {
    for (int N = 1; N <= 10; ++N)
        for (const Word& w : enumerate_words(N))
            CHECK(is_trivial(w) == (w.letters.back() == 'I'));
    // surviving words at orders 3 and 4
    std::vector<std::string> live3, live4;
    for (const Word& w : enumerate_words(3))
        if (!is_trivial(w)) live3.push_back(w.letters);
    for (const Word& w : enumerate_words(4))
        if (!is_trivial(w)) live4.push_back(w.letters);
    CHECK(live3 == std::vector<std::string>{"IJ"});
    CHECK(live4 == std::vector<std::string>{"IIJ", "JJ"});
}

TEST_CASE("expansion of IJ") {
    // J at level 1 then I at level 2 gives 6 rho (f f')(x1) f(x2) K(t1, t2)
    VolFn f = VolFn::linear(1.0);
    auto terms = expand_word(Word("IJ"), f, 0.5, false);
    REQUIRE(terms.size() == 1);
    const IntegrandTerm& t = terms[0];
    CHECK(t.base_coefficient == doctest::Approx(6.0));
    CHECK(t.rho_power == 1);
    CHECK(t.coefficient == doctest::Approx(6.0 * 0.5));
    CHECK(t.m == 2);
    CHECK(t.psi.factors == std::vector<std::vector<int>>{{0, 1}, {0}});
    CHECK(t.alpha == std::vector<int>{0, 1});
    CHECK_FALSE(t.discrete_kernel);
}

TEST_CASE("expansion of JJ") {
    // two J letters: coefficient (2*1/2) * (4*3/2) = 6, two variables, each
    // carrying f^2, no kernel couplings
    VolFn f = VolFn::linear(1.0);
    auto terms = expand_word(Word("JJ"), f, 0.8, false);
    REQUIRE(terms.size() == 1);
    const IntegrandTerm& t = terms[0];
    CHECK(t.base_coefficient == doctest::Approx(6.0));
    CHECK(t.rho_power == 0);
    CHECK(t.coefficient == doctest::Approx(6.0)); // no rho dependence
    CHECK(t.m == 2);
    CHECK(t.psi.factors == std::vector<std::vector<int>>{{0, 0}, {0, 0}});
    CHECK(t.alpha == std::vector<int>{0, 0});
}

TEST_CASE("expansion of IIJ") {
    // product rule across two I letters splits into three summands, each with
    // total coefficient 24 rho^2 (merged differently across the kernels)
    VolFn f = VolFn::linear(1.0);
    auto terms = expand_word(Word("IIJ"), f, 1.0, false);
    REQUIRE(terms.size() == 3);
    double total = 0.0;
    for (const IntegrandTerm& t : terms) {
        CHECK(t.rho_power == 2);
        CHECK(t.m == 3);
        total += t.base_coefficient;
    }
    CHECK(total == doctest::Approx(72.0)); // 3 * 24

    // second derivative hitting the first variable
    const IntegrandTerm* a = find_term(terms, {{0, 2}, {0}, {0}}, {0, 1, 1});
    REQUIRE(a != nullptr);
    CHECK(a->base_coefficient == doctest::Approx(24.0));
    // the two first-derivative factors on the first variable
    const IntegrandTerm* b = find_term(terms, {{1, 1}, {0}, {0}}, {0, 1, 1});
    REQUIRE(b != nullptr);
    CHECK(b->base_coefficient == doctest::Approx(24.0));
    // derivative falling on the kernel-attached second variable
    const IntegrandTerm* c = find_term(terms, {{0, 1}, {1}, {0}}, {0, 1, 2});
    REQUIRE(c != nullptr);
    CHECK(c->base_coefficient == doctest::Approx(24.0));
}

TEST_CASE("expansion of JJJ") {
    // pure-J coefficient telescopes to (2N)! / 2^N at N letters
    VolFn f = VolFn::linear(1.0);
    auto terms = expand_word(Word("JJJ"), f, 0.3, false);
    REQUIRE(terms.size() == 1);
    CHECK(terms[0].base_coefficient == doctest::Approx(90.0)); // 6!/8
    CHECK(terms[0].m == 3);
    CHECK(terms[0].rho_power == 0);
    for (const auto& fac : terms[0].psi.factors)
        CHECK(fac == std::vector<int>{0, 0});
}

TEST_CASE("rho handling across the expansion") {
    VolFn f = VolFn::linear(1.0);
    // rho = 0 kills every word containing I but leaves pure-J words intact
    auto ij = expand_word(Word("IJ"), f, 0.0, false);
    for (const IntegrandTerm& t : ij) CHECK(t.coefficient == 0.0);
    auto jj = expand_word(Word("JJ"), f, 0.0, false);
    CHECK(jj[0].coefficient == doctest::Approx(6.0));
    // coefficient = base * rho^{rho_power}
    for (const Word& w : enumerate_words(5)) {
        if (is_trivial(w)) continue;
        for (const IntegrandTerm& t : expand_word(w, f, 0.5, false)) {
            CHECK(t.coefficient ==
                  doctest::Approx(t.base_coefficient * std::pow(0.5, t.rho_power))
                      .epsilon(1e-13));
        }
    }
}

TEST_CASE("kernel attachments always point backward in time") {
    VolFn f = VolFn::exponential(1.0, 1.0);
    for (int N = 2; N <= 6; ++N) {
        for (const Word& w : enumerate_words(N)) {
            if (is_trivial(w)) continue;
            for (const IntegrandTerm& t : expand_word(w, f, 0.7, true)) {
                CHECK(t.discrete_kernel);
                CHECK(static_cast<int>(t.alpha.size()) == t.m);
                CHECK(static_cast<int>(t.psi.factors.size()) == t.m);
                for (int j = 0; j < t.m; ++j) {
                    // alpha[j] references an earlier variable or the constant
                    CHECK(t.alpha[j] >= 0);
                    CHECK(t.alpha[j] <= j); // 1-based source < 1-based target j+1
                }
            }
        }
    }
}

TEST_CASE("expansion snapshots are deterministic") {
    VolFn f = VolFn::linear(2.0);
    Word w("IJJ");
    auto t1 = expand_word(w, f, 0.6, false);
    auto t2 = expand_word(w, f, 0.6, false);
    CHECK(expansion_to_json(w, t1) == expansion_to_json(w, t2));
    CHECK(!expansion_to_json(w, t1).empty());
}

TEST_CASE("quoted closed form disagrees with the recursion and stays quarantined") {
    // the quoted magnitude for JJ is 2^{l-|w|} l! = 4 * 24 = 96 while the
    // operator recursion integrates to coefficient 6; keep the discrepancy
    // visible so nobody silently wires the closed form into the pipeline
    CHECK(closed_form_Cw(Word("JJ"), 1.0) == doctest::Approx(96.0));
    VolFn f = VolFn::linear(1.0);
    CHECK(expand_word(Word("JJ"), f, 1.0, false)[0].coefficient == doctest::Approx(6.0));
    // rho dependence of the quoted form still matches the recursion exponent
    CHECK(closed_form_Cw(Word("IJ"), 0.5) ==
          doctest::Approx(std::abs(0.5) * 2.0 * 6.0));
}
