#include "roughvol/word_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "roughvol/io.hpp"

namespace roughvol {

namespace {

void enumerate_rec(int remaining, std::string& prefix, std::vector<Word>& out) {
    if (remaining == 0) {
        out.push_back(Word(prefix));
        return;
    }
    prefix.push_back('I');
    enumerate_rec(remaining - 1, prefix, out);
    prefix.pop_back();
    if (remaining >= 2) {
        prefix.push_back('J');
        enumerate_rec(remaining - 2, prefix, out);
        prefix.pop_back();
    }
}

} // namespace

std::vector<Word> enumerate_words(int N) {
    if (N < 1) throw std::invalid_argument("enumerate_words needs N >= 1");
    if (N > 12) throw std::invalid_argument("enumerate_words: N > 12 rejected (combinatorial guard)");
    std::vector<Word> out;
    std::string prefix;
    enumerate_rec(N, prefix, out);
    return out;
}

bool is_trivial(const Word& w) {
    return w.letters.empty() || w.letters.back() == 'I';
}

namespace {

struct WorkTerm {
    double coeff = 1.0;
    std::vector<std::vector<int>> factors;
    std::vector<int> alpha;
};

} // namespace

std::vector<IntegrandTerm> expand_word(const Word& w, const VolFn& f, double rho, bool discrete) {
    if (w.size() == 0) throw std::invalid_argument("expand_word: empty word");
    if (is_trivial(w))
        throw std::invalid_argument("expand_word: word ends in I, the expansion is identically 0");

    // prefix weights: the letter at position j acts at level l(w_1 .. w_j)
    std::vector<int> level(w.size());
    int acc = 0;
    for (int j = 0; j < w.size(); ++j) {
        acc += w.letters[static_cast<std::size_t>(j)] == 'I' ? 1 : 2;
        level[static_cast<std::size_t>(j)] = acc;
    }

    std::vector<WorkTerm> terms = {WorkTerm{}};
    int rho_power = 0;
    for (int j = w.size() - 1; j >= 0; --j) {
        char letter = w.letters[static_cast<std::size_t>(j)];
        double N = static_cast<double>(level[static_cast<std::size_t>(j)]);
        if (letter == 'J') {
            for (WorkTerm& t : terms) {
                t.coeff *= N * (N - 1.0) / 2.0;
                t.factors.push_back({0, 0});
                t.alpha.push_back(0);
            }
        } else {
            rho_power += 1;
            std::vector<WorkTerm> next;
            for (const WorkTerm& t : terms) {
                for (std::size_t u = 0; u < t.factors.size(); ++u) {
                    for (std::size_t i = 0; i < t.factors[u].size(); ++i) {
                        WorkTerm d = t;
                        d.coeff *= N;
                        d.factors[u][i] += 1;
                        d.factors.push_back({0});
                        d.alpha.push_back(static_cast<int>(u) + 1);
                        next.push_back(std::move(d));
                    }
                }
            }
            terms = std::move(next);
        }
    }

    // canonical merge: sorted factor multisets plus the edge map identify a term
    std::map<std::pair<std::vector<std::vector<int>>, std::vector<int>>, double> merged;
    int max_order = 0;
    for (WorkTerm& t : terms) {
        for (auto& fac : t.factors)
            for (int d : fac) max_order = std::max(max_order, d);
        for (auto& fac : t.factors) std::sort(fac.begin(), fac.end());
        merged[{t.factors, t.alpha}] += t.coeff;
    }
    if (max_order > f.max_derivative_order())
        throw std::invalid_argument("expand_word: derivative order exceeds the volatility family");

    double rho_factor = std::pow(rho, rho_power);
    std::vector<IntegrandTerm> out;
    out.reserve(merged.size());
    for (const auto& [key, coeff] : merged) {
        IntegrandTerm term;
        term.base_coefficient = coeff;
        term.rho_power = rho_power;
        term.coefficient = coeff * rho_factor;
        term.psi.factors = key.first;
        term.alpha = key.second;
        term.m = static_cast<int>(key.first.size());
        term.discrete_kernel = discrete;
        out.push_back(std::move(term));
    }
    return out;
}

double closed_form_Cw(const Word& w, double rho) {
    if (is_trivial(w)) throw std::invalid_argument("closed_form_Cw: word must end in J");
    int l = w.weighted_length();
    int sz = w.size();
    double fact = 1.0;
    for (int i = 2; i <= l; ++i) fact *= i;
    return std::pow(std::fabs(rho), 2 * sz - l) * std::pow(2.0, l - sz) * fact;
}

std::string expansion_to_json(const Word& w, const std::vector<IntegrandTerm>& terms) {
    JsonWriter jw;
    jw.begin_object();
    jw.key("word").value(w.letters);
    jw.key("terms").begin_array();
    for (const IntegrandTerm& t : terms) {
        jw.begin_object();
        jw.key("coefficient").value(t.coefficient);
        jw.key("base_coefficient").value(t.base_coefficient);
        jw.key("rho_power").value(t.rho_power);
        jw.key("psi").begin_array();
        for (const auto& fac : t.psi.factors) {
            jw.begin_array();
            for (int d : fac) jw.value(d);
            jw.end_array();
        }
        jw.end_array();
        jw.key("alpha").begin_array();
        for (int a : t.alpha) jw.value(a);
        jw.end_array();
        jw.key("discrete").value(t.discrete_kernel);
        jw.end_object();
    }
    jw.end_array();
    jw.end_object();
    return jw.str();
}

} // namespace roughvol
