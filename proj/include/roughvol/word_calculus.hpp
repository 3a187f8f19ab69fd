#pragma once

#include <string>
#include <vector>

#include "roughvol/vol_fn.hpp"

namespace roughvol {

// Word over the alphabet {I, J}. I has weight 1, J has weight 2; the weighted
// length of a word is the moment order it contributes to.
struct Word {
    std::string letters;

    explicit Word(std::string s) : letters(std::move(s)) {
        for (char c : letters)
            if (c != 'I' && c != 'J') throw std::invalid_argument("word letters must be I or J");
    }
    int size() const { return static_cast<int>(letters.size()); }
    int weighted_length() const {
        int l = 0;
        for (char c : letters) l += c == 'I' ? 1 : 2;
        return l;
    }
    bool operator==(const Word&) const = default;
};

// all words of weighted length N in lexicographic order; the count obeys
// a_N = a_{N-1} + a_{N-2} with a_1 = 1, a_2 = 2
std::vector<Word> enumerate_words(int N);

// words ending in I annihilate the constant function and contribute nothing
bool is_trivial(const Word& w);

// One fully expanded summand of the moment representation. Variables are
// numbered 1..m with times t_1 > t_2 > ... > t_m; variable j carries the factor
// multiset psi.factors[j-1]; alpha[j-1] = q > 0 attaches a kernel factor
// K(t_q, t_j) (alpha = 0 means the constant-one kernel).
struct IntegrandTerm {
    double coefficient;      // full numeric coefficient, rho power included
    double base_coefficient; // combinatorial part, rho power excluded
    int rho_power;           // number of I letters = 2|w| - l(w)
    ElementaryPsi psi;
    std::vector<int> alpha;
    int m = 0;
    bool discrete_kernel = false;
};

// Applies the operator chain of the word to the constant function 1, letters
// processed right to left, the letter at prefix-weight N acting as level N:
//   I at level N:  rho * N * f(y) * sum_j dF/dx_j * K(t_j, s)
//   J at level N:  N(N-1)/2 * f(y)^2 * F
// The product rule is expanded fully and like terms are merged on a canonical
// key, so equal inputs give byte-identical term lists.
std::vector<IntegrandTerm> expand_word(const Word& w, const VolFn& f, double rho, bool discrete);

// The closed-form magnitude |rho|^{2|w|-l(w)} 2^{l(w)-|w|} l(w)! quoted for C_w.
// Exposed only for cross-checking: it disagrees with the operator recursion by
// constant factors (e.g. JJ: 96 here vs 6 from the recursion), and the recursion
// is what the worked moment examples validate, so nothing downstream uses this.
double closed_form_Cw(const Word& w, double rho);

// debug dump of an expansion for regression snapshots
std::string expansion_to_json(const Word& w, const std::vector<IntegrandTerm>& terms);

} // namespace roughvol
