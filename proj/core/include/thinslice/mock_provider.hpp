#pragma once

#include <cstdint>
#include <memory>

#include "thinslice/provider.hpp"

namespace thinslice {

enum class MockMode {
    Digest,         // rating = 1 + digest(model, prompt, slice text, seed) mod 10
    QualitySignal,  // rating = latent per-speech score + fraction-dependent noise
};

struct MockOptions {
    std::uint64_t seed = 0;
    MockMode mode = MockMode::Digest;
    /// Quality-signal noise amplitude; the per-cell noise sd is
    /// noise_scale * (1 - f) / sqrt(f), so it shrinks to 0 at the full speech.
    double noise_scale = 0.9;
};

/// Deterministic offline rater. A pure function of its inputs: same request
/// and seed always yield the same rating, regardless of call order.
class MockProvider : public Provider {
public:
    MockProvider(std::string provider_id, std::string model_name, MockOptions opts = {});

    std::string provider_id() const override { return provider_id_; }
    std::string model_name() const override { return model_name_; }
    std::string complete(const RatingRequest& req) override;

    /// Latent quality score in [2,8] for a speech, before noise.
    double latent_quality(const std::string& speech_id) const;

private:
    std::string provider_id_;
    std::string model_name_;
    MockOptions opts_;
};

}  // namespace thinslice
