#include "scn/committee.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace scn {

InputStats compute_stats(const Image& img) {
    InputStats stats;
    stats.min = img.data[0];
    stats.max = img.data[0];
    double acc = 0.0;
    for (double v : img.data) {
        stats.min = std::min(stats.min, v);
        stats.max = std::max(stats.max, v);
        acc += v;
    }
    stats.mean = acc / static_cast<double>(img.data.size());
    return stats;
}

const std::vector<std::string>& committee_names() {
    static const std::vector<std::string> names = {
        "none", "scn-f", "scn-r", "scn-fr", "scn-i", "scn-full", "scn-l"};
    return names;
}

namespace {

std::vector<CommitteeMember> fr_members(const std::vector<int>& ks, const AffineParams& affine) {
    std::vector<CommitteeMember> members;
    members.reserve(ks.size());
    for (int k : ks) members.push_back({D4Transform(k), affine});
    return members;
}

}  // namespace

CommitteeSpec build_preset(const std::string& name,
                           const std::optional<InputStats>& input_stats) {
    CommitteeSpec spec;
    spec.name = name;
    const AffineParams identity{};
    const AffineParams inversion{-1.0, 1.0};

    if (name == "none") {
        spec.members = fr_members({1}, identity);
    } else if (name == "scn-f") {
        spec.members = fr_members({1, 2}, identity);
    } else if (name == "scn-r") {
        spec.members = fr_members({1, 3, 5, 7}, identity);
    } else if (name == "scn-fr") {
        spec.members = fr_members({1, 2, 3, 4, 5, 6, 7, 8}, identity);
    } else if (name == "scn-i") {
        spec.members = {{D4Transform(1), identity}, {D4Transform(1), inversion}};
    } else if (name == "scn-full") {
        spec.members = fr_members({1, 2, 3, 4, 5, 6, 7, 8}, identity);
        const auto inverted = fr_members({1, 2, 3, 4, 5, 6, 7, 8}, inversion);
        spec.members.insert(spec.members.end(), inverted.begin(), inverted.end());
    } else if (name == "scn-l") {
        if (!input_stats)
            throw ValidationError("scn-l requires input statistics (min, max, mean)");
        const double range = input_stats->max - input_stats->min;
        if (std::fabs(range) <= 1e-6) {
            // The range-derived scales are undefined on a constant image.
            spec.members = fr_members({1}, identity);
            spec.scn_l_fallback = true;
        } else {
            for (double alpha : {range, 1.0, 1.0 / range}) {
                const double beta = (1.0 - alpha) * input_stats->mean;
                spec.members.push_back({D4Transform(1), AffineParams(alpha, beta)});
            }
        }
    } else {
        throw ValidationError("unknown committee preset: " + name);
    }
    return spec;
}

namespace {

Image evaluate_member(const CommitteeMember& m, const Restorer& r, const Image& img) {
    const Image transformed = apply_d4(m.d4, apply_affine(m.affine, img));
    const Image restored = r.restore(transformed);
    if (!restored.same_shape(transformed))
        throw ValidationError("restorer changed image dimensions");
    return invert_affine(m.affine, invert_d4(m.d4, restored));
}

}  // namespace

CommitteeResult run_committee(const CommitteeSpec& spec, const Restorer& r, const Image& img) {
    if (spec.members.empty()) throw ValidationError("committee has no members");

    const std::size_t count = spec.members.size();
    std::vector<Image> members(count);

    if (count == 1) {
        members[0] = evaluate_member(spec.members[0], r, img);
    } else {
        // Members are independent; evaluate on a pool and keep results
        // indexed so the reduction below stays in spec order.
        unsigned workers = std::thread::hardware_concurrency();
        if (workers == 0) workers = 2;
        workers = std::min<unsigned>(workers, static_cast<unsigned>(count));

        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> errors(count);
        auto run = [&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    members[i] = evaluate_member(spec.members[i], r, img);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(run);
        for (auto& t : pool) t.join();

        for (std::size_t i = 0; i < count; ++i) {
            if (!errors[i]) continue;
            try {
                std::rethrow_exception(errors[i]);
            } catch (const std::exception& e) {
                throw ValidationError("committee member " + std::to_string(i) +
                                      " failed: " + e.what());
            }
        }
    }

    CommitteeResult result;
    result.output = Image(img.height, img.width);
    for (std::size_t p = 0; p < result.output.data.size(); ++p) {
        double acc = 0.0;
        for (const Image& m : members) acc += m.data[p];
        result.output.data[p] = acc / static_cast<double>(count);
    }
    result.members = std::move(members);
    return result;
}

double committee_spread(const std::vector<Image>& member_images) {
    if (member_images.empty()) throw ValidationError("committee_spread needs >= 1 member");
    for (const Image& m : member_images)
        if (!m.same_shape(member_images.front()))
            throw ValidationError("committee_spread: member dimensions differ");

    double spread = 0.0;
    for (std::size_t p = 0; p < member_images.front().data.size(); ++p) {
        double lo = member_images[0].data[p];
        double hi = lo;
        for (const Image& m : member_images) {
            lo = std::min(lo, m.data[p]);
            hi = std::max(hi, m.data[p]);
        }
        spread = std::max(spread, hi - lo);
    }
    return spread;
}

}  // namespace scn
