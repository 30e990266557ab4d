#ifndef FLUXREC_CATALOG_HPP
#define FLUXREC_CATALOG_HPP

#include <string>

#include "fluxrec/reconstruct.hpp"

namespace fluxrec {

/// Named ground-truth flux pair with its hyperbolicity rectangle, default
/// reconstruction box, and closed-form regularity constants on subintervals
/// (Lipschitz constant of f' and, when available, sup |f'''|).
struct CatalogEntry {
    std::string name;
    FluxPair pair;
    Rect solver_rect;
    GridSpec default_box;
    std::function<double(Interval)> lipschitz_f1d;
    std::function<double(Interval)> lipschitz_f2d;
    std::function<std::optional<double>(Interval)> third_bound_f1;
    std::function<std::optional<double>(Interval)> third_bound_f2;
};

/// Entries: linear, exp-pair, c11-kink, psystem-gamma.
const CatalogEntry& catalog_entry(const std::string& name);
std::vector<std::string> catalog_names();

}  // namespace fluxrec

#endif  // FLUXREC_CATALOG_HPP
