#pragma once

#include <compare>
#include <string>
#include <vector>

#include "thinslice/corpus.hpp"

namespace thinslice {

enum class SliceKind { Fraction, FixedWords };

/// Slice thickness: leading fraction of a transcript, or a fixed word count.
/// Fraction 1.0 denotes the full speech.
struct SliceSpec {
    SliceKind kind = SliceKind::Fraction;
    double value = 1.0;  // fraction in (0,1], or word count >= 1

    static SliceSpec fraction(double f);
    static SliceSpec fixed_words(int n);

    bool is_full_fraction() const { return kind == SliceKind::Fraction && value == 1.0; }

    std::string kind_name() const;   // "fraction" | "words"
    std::string value_repr() const;  // canonical, round-trippable

    static SliceSpec parse(const std::string& kind_name, const std::string& value_repr);

    friend auto operator<=>(const SliceSpec&, const SliceSpec&) = default;
};

struct Slice {
    std::string speech_id;
    SliceSpec spec;
    std::string text;  // prefix of the parent word sequence, single-space joined
    std::size_t word_count = 0;
};

/// word_count = ceil(f * parent word count), clamped to [1, parent].
Slice slice_by_fraction(const Transcript& t, double f);

/// word_count = min(n, parent word count).
Slice slice_by_word_count(const Transcript& t, int n);

Slice make_slice(const Transcript& t, const SliceSpec& spec);

/// [0.01, 0.05, 0.10, 0.20, 0.30, 0.40, 0.50, 0.75, 1.00]
std::vector<double> default_fraction_grid();

/// {15, 60, 120, 240, 480}
std::vector<int> default_word_grid();

}  // namespace thinslice
