#include "thinslice/slicer.hpp"

#include <cmath>
#include <cstdio>

#include "thinslice/errors.hpp"

namespace thinslice {

SliceSpec SliceSpec::fraction(double f) {
    if (!(f > 0.0) || f > 1.0) {
        throw DataError("invalid fraction: " + std::to_string(f) + " (must be in (0,1])");
    }
    return {SliceKind::Fraction, f};
}

SliceSpec SliceSpec::fixed_words(int n) {
    if (n < 1) {
        throw DataError("invalid word count: " + std::to_string(n) + " (must be >= 1)");
    }
    return {SliceKind::FixedWords, static_cast<double>(n)};
}

std::string SliceSpec::kind_name() const {
    return kind == SliceKind::Fraction ? "fraction" : "words";
}

std::string SliceSpec::value_repr() const {
    if (kind == SliceKind::FixedWords) {
        return std::to_string(static_cast<long long>(value));
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.10g", value);
    return buf;
}

SliceSpec SliceSpec::parse(const std::string& kind_name, const std::string& value_repr) {
    try {
        if (kind_name == "fraction") return fraction(std::stod(value_repr));
        if (kind_name == "words") return fixed_words(std::stoi(value_repr));
    } catch (const std::invalid_argument&) {
        throw DataError("bad slice value: " + value_repr);
    } catch (const std::out_of_range&) {
        throw DataError("bad slice value: " + value_repr);
    }
    throw DataError("unknown slice kind: " + kind_name);
}

namespace {

Slice prefix_slice(const Transcript& t, const SliceSpec& spec, std::size_t n_words) {
    Slice s;
    s.speech_id = t.speech_id;
    s.spec = spec;
    s.word_count = n_words;
    std::size_t total = 0;
    for (std::size_t i = 0; i < n_words; ++i) total += t.words[i].size();
    s.text.reserve(total + n_words);
    for (std::size_t i = 0; i < n_words; ++i) {
        if (i) s.text.push_back(' ');
        s.text += t.words[i];
    }
    return s;
}

}  // namespace

Slice slice_by_fraction(const Transcript& t, double f) {
    SliceSpec spec = SliceSpec::fraction(f);
    if (t.word_count < 1) throw DataError("cannot slice empty transcript: " + t.speech_id);
    auto n = static_cast<std::size_t>(std::ceil(f * static_cast<double>(t.word_count)));
    n = std::max<std::size_t>(1, std::min(n, t.word_count));
    return prefix_slice(t, spec, n);
}

Slice slice_by_word_count(const Transcript& t, int n) {
    SliceSpec spec = SliceSpec::fixed_words(n);
    if (t.word_count < 1) throw DataError("cannot slice empty transcript: " + t.speech_id);
    return prefix_slice(t, spec, std::min<std::size_t>(static_cast<std::size_t>(n), t.word_count));
}

Slice make_slice(const Transcript& t, const SliceSpec& spec) {
    if (spec.kind == SliceKind::Fraction) return slice_by_fraction(t, spec.value);
    return slice_by_word_count(t, static_cast<int>(spec.value));
}

std::vector<double> default_fraction_grid() {
    return {0.01, 0.05, 0.10, 0.20, 0.30, 0.40, 0.50, 0.75, 1.00};
}

std::vector<int> default_word_grid() { return {15, 60, 120, 240, 480}; }

}  // namespace thinslice
