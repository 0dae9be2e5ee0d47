#pragma once

#include <optional>
#include <string>
#include <vector>

#include "scn/image.hpp"
#include "scn/restorer.hpp"
#include "scn/transforms.hpp"

namespace scn {

// One committee member: the input is mapped through alpha*Y+beta and then the
// flip/rotation, restored, and both maps are undone in reverse order.
struct CommitteeMember {
    D4Transform d4{1};
    AffineParams affine{};
};

struct CommitteeSpec {
    std::string name;
    std::vector<CommitteeMember> members;  // aggregation order
    // Set when scn-l was requested on a (near-)constant image and collapsed
    // to the single identity member.
    bool scn_l_fallback = false;
};

struct InputStats {
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
};

InputStats compute_stats(const Image& img);

// Canonical preset names.
const std::vector<std::string>& committee_names();

// Builds one of the named presets:
//   none      1 member   identity
//   scn-f     2 members  k in {1,2}
//   scn-r     4 members  k in {1,3,5,7}
//   scn-fr    8 members  k in {1..8}
//   scn-i     2 members  (alpha,beta) in {(1,0),(-1,1)}
//   scn-full 16 members  scn-i x scn-fr, identity affine block first
//   scn-l     3 members  k=1, alpha in {max-min, 1, 1/(max-min)},
//                        beta = (1-alpha)*mean  (stats required)
// scn-l degenerates to the single identity member when max-min is within
// 1e-6 of zero, with scn_l_fallback set.
CommitteeSpec build_preset(const std::string& name,
                           const std::optional<InputStats>& input_stats = std::nullopt);

struct CommitteeResult {
    Image output;                // uniform average of members, in spec order
    std::vector<Image> members;  // de-transformed member estimates
};

// Evaluates every member and averages. Members run on a small worker pool;
// the reduction always happens in spec order, so the result does not depend
// on the worker count. No clamping anywhere before the average.
CommitteeResult run_committee(const CommitteeSpec& spec, const Restorer& r, const Image& img);

// Max over pixels of (max member value - min member value): zero iff the
// restorer is exactly invariant under the committee's transforms.
double committee_spread(const std::vector<Image>& member_images);

}  // namespace scn
