#include "oscillent/entropy_result.hpp"

namespace oscillent {

std::string_view to_string(EntropyMethod m) {
    switch (m) {
    case EntropyMethod::closed_form: return "closed_form";
    case EntropyMethod::quadrature: return "quadrature";
    case EntropyMethod::torus_mc: return "torus_mc";
    case EntropyMethod::trajectory: return "trajectory";
    case EntropyMethod::exact_kernel: return "exact_kernel";
    case EntropyMethod::wkb_closed_form: return "wkb_closed_form";
    case EntropyMethod::wkb_spectrum_quadrature: return "wkb_spectrum_quadrature";
    case EntropyMethod::wkb_kernel: return "wkb_kernel";
    case EntropyMethod::ground_state_small_c: return "ground_state_small_c";
    case EntropyMethod::low_excitation: return "low_excitation";
    }
    return "unknown";
}

void to_json(nlohmann::json& j, const EntropyResult& r) {
    j = {{"method", std::string(to_string(r.method))},
         {"value", r.value},
         {"uncertainty", r.uncertainty},
         {"metadata", r.metadata},
         {"warnings", r.warnings}};
}

} // namespace oscillent
