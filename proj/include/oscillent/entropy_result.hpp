#pragma once

#include <json.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace oscillent {

enum class EntropyMethod {
    closed_form,
    quadrature,
    torus_mc,
    trajectory,
    exact_kernel,
    wkb_closed_form,
    wkb_spectrum_quadrature,
    wkb_kernel,
    ground_state_small_c,
    low_excitation,
};

std::string_view to_string(EntropyMethod m);

struct EntropyResult {
    double value = 0.0;  // nats
    EntropyMethod method = EntropyMethod::closed_form;
    double uncertainty = 0.0;  // standard error (stochastic) or quadrature error estimate
    nlohmann::json metadata = nlohmann::json::object();
    std::vector<std::string> warnings;
};

void to_json(nlohmann::json& j, const EntropyResult& r);

} // namespace oscillent
