#pragma once

#include <cstddef>

#include "crosslink/types.hpp"

namespace crosslink {

// Execution pricing plus the prepaid-fee function. The cost function is
// additive by default, F = f_base + C_d; a config multiplier may scale the
// C_d term, never below the additive floor.
struct FeeSchedule {
    FeeUnits f_base = 10;
    FeeUnits per_call = 3;
    FeeUnits per_write = 2;
    FeeUnits cd_multiplier_num = 1;
    FeeUnits cd_multiplier_den = 1;

    FeeUnits exec_cost(std::size_t write_count) const {
        return per_call + per_write * static_cast<FeeUnits>(write_count);
    }

    FeeUnits estimate_cd(std::size_t declared_writes) const { return exec_cost(declared_writes); }

    FeeUnits fee_for(FeeUnits estimated_cd) const {
        FeeUnits scaled = estimated_cd;
        if (cd_multiplier_den != 0 && cd_multiplier_num > cd_multiplier_den)
            scaled = estimated_cd * cd_multiplier_num / cd_multiplier_den;
        return f_base + (scaled > estimated_cd ? scaled : estimated_cd);
    }
};

}  // namespace crosslink
