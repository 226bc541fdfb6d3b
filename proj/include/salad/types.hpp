#pragma once

#include <cstdint>

namespace salad {

/// One delayed ACK/NACK observation delivered to an adapter. `slot` is the
/// slot of the original transmission; `mcs` and `tbs_bits` are what was used
/// there, which the adapter needs to evaluate the predicted BLER in hindsight.
struct HarqFeedback {
    long slot = 0;
    int mcs = 0;
    int tbs_bits = 0;
    bool nack = false;
};

}  // namespace salad
