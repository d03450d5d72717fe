#include "thinslice/mock_provider.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "thinslice/digest.hpp"

namespace thinslice {

namespace {

constexpr char kSep = '\x1f';

double unit_uniform(std::string_view payload) {
    // 53-bit mantissa from the digest, uniform in (0,1).
    auto u = digest_u64(payload) >> 11;
    return (static_cast<double>(u) + 0.5) / 9007199254740992.0;  // 2^53
}

double standard_normal(const std::string& payload) {
    double u1 = unit_uniform(payload + kSep + "u1");
    double u2 = unit_uniform(payload + kSep + "u2");
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

MockProvider::MockProvider(std::string provider_id, std::string model_name, MockOptions opts)
    : provider_id_(std::move(provider_id)), model_name_(std::move(model_name)), opts_(opts) {}

double MockProvider::latent_quality(const std::string& speech_id) const {
    std::string payload = speech_id + kSep + "latent" + kSep + std::to_string(opts_.seed);
    return 2.0 + 6.0 * unit_uniform(payload);
}

std::string MockProvider::complete(const RatingRequest& req) {
    int rating;
    if (opts_.mode == MockMode::Digest) {
        std::string payload = req.model_name + kSep + req.prompt_id + kSep + req.slice_text +
                              kSep + std::to_string(opts_.seed);
        rating = 1 + static_cast<int>(digest_u64(payload) % 10);
    } else {
        double q = latent_quality(req.speech_id);
        double f = req.spec.kind == SliceKind::Fraction ? req.spec.value : 1.0;
        double sigma = opts_.noise_scale * (1.0 - f) / std::sqrt(f);
        double noise = 0.0;
        if (sigma > 0.0) {
            std::string payload = req.speech_id + kSep + req.model_name + kSep + req.prompt_id +
                                  kSep + req.spec.value_repr() + kSep +
                                  std::to_string(opts_.seed);
            noise = sigma * standard_normal(payload);
        }
        rating = static_cast<int>(std::lround(q + noise));
        rating = std::clamp(rating, 1, 10);
    }
    return std::to_string(rating);
}

}  // namespace thinslice
