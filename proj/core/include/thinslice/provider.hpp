#pragma once

#include <string>

#include "thinslice/slicer.hpp"

namespace thinslice {

/// One stateless rating request. Every call stands alone: no conversation
/// history may link two requests (the independence contract).
struct RatingRequest {
    std::string provider_id;
    std::string model_name;
    std::string prompt_id;
    std::string prompt_text;  // fully rendered prompt, slice text included
    std::string speech_id;
    SliceSpec spec;
    std::string slice_text;
    double temperature = 0.0;
};

class Provider {
public:
    virtual ~Provider() = default;

    virtual std::string provider_id() const = 0;
    virtual std::string model_name() const = 0;

    /// Raw assistant text for one request. Throws ProviderError on transport
    /// failure; parse failures are handled by the caller.
    virtual std::string complete(const RatingRequest& req) = 0;
};

}  // namespace thinslice
