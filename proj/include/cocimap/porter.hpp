#pragma once

#include <string>
#include <string_view>

// Porter stemming algorithm (Porter 1980), classic rule set.

namespace cocimap::porter {

namespace detail {

inline bool is_consonant(const std::string& w, std::size_t i) {
    char c = w[i];
    switch (c) {
        case 'a': case 'e': case 'i': case 'o': case 'u':
            return false;
        case 'y':
            return i == 0 ? true : !is_consonant(w, i - 1);
        default:
            return true;
    }
}

// m() = number of VC sequences in w[0..end)
inline int measure(const std::string& w, std::size_t end) {
    int m = 0;
    std::size_t i = 0;
    while (i < end && is_consonant(w, i)) ++i;
    while (i < end) {
        while (i < end && !is_consonant(w, i)) ++i;
        if (i >= end) break;
        ++m;
        while (i < end && is_consonant(w, i)) ++i;
    }
    return m;
}

inline bool has_vowel(const std::string& w, std::size_t end) {
    for (std::size_t i = 0; i < end; ++i)
        if (!is_consonant(w, i)) return true;
    return false;
}

inline bool ends_double_consonant(const std::string& w) {
    std::size_t n = w.size();
    return n >= 2 && w[n - 1] == w[n - 2] && is_consonant(w, n - 1);
}

// *o: stem ends cvc where the final c is not w, x or y
inline bool ends_cvc(const std::string& w, std::size_t end) {
    if (end < 3) return false;
    if (!is_consonant(w, end - 3) || is_consonant(w, end - 2) || !is_consonant(w, end - 1))
        return false;
    char c = w[end - 1];
    return c != 'w' && c != 'x' && c != 'y';
}

inline bool ends_with(const std::string& w, std::string_view suf) {
    return w.size() >= suf.size() &&
           std::string_view(w).substr(w.size() - suf.size()) == suf;
}

struct Rule {
    std::string_view suffix;
    std::string_view replacement;
};

// Apply first matching rule whose stem has m > threshold. Returns true if a
// suffix matched (whether or not the condition passed).
inline bool replace_if(std::string& w, std::initializer_list<Rule> rules, int min_m) {
    for (const auto& r : rules) {
        if (!ends_with(w, r.suffix)) continue;
        std::size_t stem = w.size() - r.suffix.size();
        if (measure(w, stem) > min_m) {
            w.resize(stem);
            w.append(r.replacement);
        }
        return true;
    }
    return false;
}

}  // namespace detail

// Stems one lowercase token. Tokens of length <= 2 and tokens whose suffixes
// never match a rule (e.g. "bcl-2", "chromosome-11") pass through unchanged.
inline std::string stem(std::string w) {
    using namespace detail;
    if (w.size() <= 2) return w;

    // step 1a
    if (ends_with(w, "sses")) w.resize(w.size() - 2);
    else if (ends_with(w, "ies")) w.resize(w.size() - 2);
    else if (ends_with(w, "ss")) { /* keep */ }
    else if (ends_with(w, "s")) w.pop_back();

    // step 1b
    if (ends_with(w, "eed")) {
        if (measure(w, w.size() - 3) > 0) w.pop_back();
    } else {
        bool fired = false;
        if (ends_with(w, "ed") && has_vowel(w, w.size() - 2)) {
            w.resize(w.size() - 2);
            fired = true;
        } else if (ends_with(w, "ing") && has_vowel(w, w.size() - 3)) {
            w.resize(w.size() - 3);
            fired = true;
        }
        if (fired) {
            if (ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz")) {
                w.push_back('e');
            } else if (ends_double_consonant(w)) {
                char c = w.back();
                if (c != 'l' && c != 's' && c != 'z') w.pop_back();
            } else if (measure(w, w.size()) == 1 && ends_cvc(w, w.size())) {
                w.push_back('e');
            }
        }
    }

    // step 1c
    if (ends_with(w, "y") && has_vowel(w, w.size() - 1)) w.back() = 'i';

    // step 2
    replace_if(w,
               {{"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},
                {"anci", "ance"},   {"izer", "ize"},    {"abli", "able"},
                {"alli", "al"},     {"entli", "ent"},   {"eli", "e"},
                {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
                {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"},
                {"fulness", "ful"}, {"ousness", "ous"}, {"aliti", "al"},
                {"iviti", "ive"},   {"biliti", "ble"}},
               0);

    // step 3
    replace_if(w,
               {{"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
                {"ical", "ic"},  {"ful", ""},   {"ness", ""}},
               0);

    // step 4
    {
        bool matched =
            replace_if(w,
                       {{"al", ""},    {"ance", ""}, {"ence", ""}, {"er", ""},
                        {"ic", ""},    {"able", ""}, {"ible", ""}, {"ant", ""},
                        {"ement", ""}, {"ment", ""}, {"ent", ""}},
                       1);
        if (!matched) {
            if (ends_with(w, "ion")) {
                std::size_t stem = w.size() - 3;
                if (stem > 0 && (w[stem - 1] == 's' || w[stem - 1] == 't') &&
                    measure(w, stem) > 1)
                    w.resize(stem);
            } else {
                replace_if(w,
                           {{"ou", ""},  {"ism", ""}, {"ate", ""}, {"iti", ""},
                            {"ous", ""}, {"ive", ""}, {"ize", ""}},
                           1);
            }
        }
    }

    // step 5a
    if (ends_with(w, "e")) {
        int m = measure(w, w.size() - 1);
        if (m > 1 || (m == 1 && !ends_cvc(w, w.size() - 1))) w.pop_back();
    }

    // step 5b
    if (ends_with(w, "ll") && measure(w, w.size()) > 1) w.pop_back();

    return w;
}

}  // namespace cocimap::porter
