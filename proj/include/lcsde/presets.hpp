#pragma once

#include "lcsde/finance.hpp"
#include "lcsde/sde.hpp"

#include <string>

namespace lcsde {

// Named coefficient presets so experiment runs need no hand-written
// field specs.
struct Preset {
    std::string name;
    LCSet xi;
    DriftSpec drift;
    DiffusionSpec diffusion;
    TimeGrid default_grid{1.0, 64};

    Preset(std::string name_, LCSet xi_) : name(std::move(name_)), xi(std::move(xi_)) {}
};

// Known names: "cone-constant", "compounding", "bounded-diffusion".
Preset make_preset(const std::string& name);
bool preset_exists(const std::string& name);

// Market parameters behind the "finance-default" experiment mode.
MarketParams default_market();

} // namespace lcsde
