#include "qtt/cli.hpp"

namespace qtt::cli {

UnitSystem units_for_mode(const std::string& mode) {
    if (mode == "natural") return {1.0, 1.0};
    if (mode == "electron") return {1.0, 1.0 / (2.0 * kHbarSqOver2MeEvNm2)};
    throw domain_error("unknown units mode '" + mode + "' (expected natural or electron)");
}

} // namespace qtt::cli
