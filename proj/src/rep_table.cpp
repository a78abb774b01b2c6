#include "pv/rep_table.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "pv/errors.hpp"

namespace pv {

u128 RepTable::total_mass() const {
    u128 m = 0;
    for (std::uint64_t v : mults) m += v;
    return m;
}

RepTable point_table(const MonomialSystem& sys, const PointBox& box, int layout_folds) {
    std::vector<std::pair<std::int64_t, std::int64_t>> pts;
    pts.reserve(box.npoints());
    for (std::int64_t x = box.x_lo; x <= box.x_hi; ++x)
        for (std::int64_t y = box.y_lo; y <= box.y_hi; ++y) pts.emplace_back(x, y);
    return point_table_from(sys, box, layout_folds, pts);
}

RepTable point_table_from(const MonomialSystem& sys, const PointBox& box, int layout_folds,
                          const std::vector<std::pair<std::int64_t, std::int64_t>>& points) {
    RepTable t;
    t.sys = sys;
    t.s_level = 1;
    t.box = box;
    t.layout = KeyLayout::create(sys, layout_folds, box);
    t.keys.reserve(points.size());
    for (const auto& [x, y] : points) t.keys.push_back(t.layout.pack_folds(moment_map(sys, x, y), 1));
    std::sort(t.keys.begin(), t.keys.end());
    for (std::size_t i = 1; i < t.keys.size(); ++i)
        if (t.keys[i] == t.keys[i - 1]) throw ValidationError("duplicate point in point table");
    t.mults.assign(t.keys.size(), 1);
    return t;
}

namespace {

template <class KeyT>
struct Entry {
    KeyT key;
    std::uint64_t mult;
};

// LSD radix sort on the low `bits` bits of the keys; digits whose histogram
// is concentrated in one bucket are skipped.
template <class KeyT>
void radix_sort(std::vector<Entry<KeyT>>& buf, std::vector<Entry<KeyT>>& scratch, int bits) {
    const std::size_t n = buf.size();
    if (n < 2) return;
    scratch.resize(n);
    int passes = (bits + 7) / 8;
    for (int p = 0; p < passes; ++p) {
        const int shift = 8 * p;
        std::size_t hist[256] = {0};
        for (const auto& e : buf) ++hist[static_cast<std::size_t>((e.key >> shift) & 0xff)];
        bool single = false;
        for (std::size_t b = 0; b < 256; ++b)
            if (hist[b] == n) {
                single = true;
                break;
            }
        if (single) continue;
        std::size_t pos[256];
        std::size_t acc = 0;
        for (std::size_t b = 0; b < 256; ++b) {
            pos[b] = acc;
            acc += hist[b];
        }
        for (const auto& e : buf) scratch[pos[static_cast<std::size_t>((e.key >> shift) & 0xff)]++] = e;
        buf.swap(scratch);
    }
}

template <class KeyT>
struct PartitionOut {
    std::vector<KeyT> keys;
    std::vector<std::uint64_t> mults;
    u128 mass = 0;
    u128 sum_sq = 0;
    std::size_t distinct = 0;
};

template <class KeyT>
JoinResult convolve_impl(const std::vector<KeyT>& rkeys, const std::vector<std::uint64_t>& rmults,
                         const std::vector<KeyT>& wkeys, int total_bits, const CountOptions& opts,
                         bool materialize, std::vector<PartitionOut<KeyT>>& parts) {
    const double emitted = static_cast<double>(rkeys.size()) * static_cast<double>(wkeys.size());
    if (emitted > opts.max_emitted)
        throw BudgetError("memory budget exceeded; estimated join emission " + std::to_string(emitted) +
                          " entries");

    const int target_bits = std::clamp(opts.partition_target_bits, 8, 30);
    int part_bits = 0;
    while (part_bits < total_bits && (emitted / static_cast<double>(1ULL << part_bits)) >
                                         static_cast<double>(1ULL << target_bits))
        ++part_bits;
    part_bits = std::min(part_bits, 14);
    const std::size_t nparts = static_cast<std::size_t>(1) << part_bits;
    const int low_bits = total_bits - part_bits;

    parts.assign(nparts, {});

    auto part_lo = [&](std::size_t p) -> KeyT {
        if (part_bits == 0) return 0;
        return static_cast<KeyT>(static_cast<u128>(p) << low_bits);
    };

    parallel_chunks(nparts, opts.threads, [&](std::size_t p) {
        PartitionOut<KeyT>& out = parts[p];
        std::vector<Entry<KeyT>> buf;
        std::vector<Entry<KeyT>> scratch;
        const bool last = p + 1 == nparts;
        const KeyT lo = part_lo(p);
        const KeyT hi = last ? KeyT(0) : part_lo(p + 1);  // hi unused on the last partition
        for (const KeyT w : wkeys) {
            // contributing table keys: z with lo <= z + w < hi
            KeyT zlo = (w > lo) ? KeyT(0) : lo - w;
            auto begin = std::lower_bound(rkeys.begin(), rkeys.end(), zlo);
            auto end = rkeys.end();
            if (!last) {
                if (w > hi)
                    end = begin;
                else
                    end = std::lower_bound(begin, rkeys.end(), hi - w);
            }
            for (auto it = begin; it != end; ++it) {
                std::size_t idx = static_cast<std::size_t>(it - rkeys.begin());
                buf.push_back({static_cast<KeyT>(*it + w), rmults[idx]});
            }
        }
        radix_sort(buf, scratch, low_bits);
        // merge equal keys, accumulating the tallies
        std::size_t i = 0;
        const std::size_t n = buf.size();
        while (i < n) {
            std::size_t j = i + 1;
            u128 m = buf[i].mult;
            while (j < n && buf[j].key == buf[i].key) {
                m += buf[j].mult;
                ++j;
            }
            out.mass += m;
            out.sum_sq += m * m;
            ++out.distinct;
            if (materialize) {
                out.keys.push_back(buf[i].key);
                out.mults.push_back(static_cast<std::uint64_t>(m));
            }
            i = j;
        }
    });

    JoinResult res;
    for (const auto& part : parts) {
        res.mass += part.mass;
        res.sum_sq += part.sum_sq;
        res.support += part.distinct;
    }
    return res;
}

template <class KeyT>
std::vector<KeyT> narrow_keys(const std::vector<u128>& keys) {
    std::vector<KeyT> out(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i) out[i] = static_cast<KeyT>(keys[i]);
    return out;
}

}  // namespace

JoinResult convolve_step(const RepTable& table, const RepTable& points, const CountOptions& opts, RepTable* out) {
    if (table.layout.total_bits != points.layout.total_bits || table.layout.box != points.box ||
        table.layout.s != points.layout.s)
        throw ValidationError("join requires tables packed with the same layout");

    JoinResult res;
    const int bits = table.layout.total_bits;
    if (bits <= 64) {
        std::vector<PartitionOut<std::uint64_t>> parts;
        auto rk = narrow_keys<std::uint64_t>(table.keys);
        auto wk = narrow_keys<std::uint64_t>(points.keys);
        res = convolve_impl<std::uint64_t>(rk, table.mults, wk, bits, opts, out != nullptr, parts);
        if (out != nullptr) {
            out->keys.clear();
            out->mults.clear();
            out->keys.reserve(res.support);
            out->mults.reserve(res.support);
            for (auto& part : parts) {
                for (std::uint64_t k : part.keys) out->keys.push_back(k);
                out->mults.insert(out->mults.end(), part.mults.begin(), part.mults.end());
            }
        }
    } else {
        std::vector<PartitionOut<u128>> parts;
        res = convolve_impl<u128>(table.keys, table.mults, points.keys, bits, opts, out != nullptr, parts);
        if (out != nullptr) {
            out->keys.clear();
            out->mults.clear();
            out->keys.reserve(res.support);
            out->mults.reserve(res.support);
            for (auto& part : parts) {
                out->keys.insert(out->keys.end(), part.keys.begin(), part.keys.end());
                out->mults.insert(out->mults.end(), part.mults.begin(), part.mults.end());
            }
        }
    }

    if (out != nullptr) {
        out->sys = table.sys;
        out->s_level = table.s_level + 1;
        out->box = table.box;
        out->layout = table.layout;
    }
    return res;
}

RepTable build_rep_table_box(const MonomialSystem& sys, int s, const PointBox& box, const CountOptions& opts) {
    if (s < 1) throw ValidationError("fold count must be >= 1");
    RepTable pts = point_table(sys, box, s);
    if (s == 1) return pts;

    const double m = static_cast<double>(box.npoints());
    double est_support = m;
    for (int level = 2; level <= s; ++level) {
        est_support = std::min(est_support * m, std::pow(m, static_cast<double>(level)));
        if (est_support > static_cast<double>(opts.max_table_entries))
            throw BudgetError("memory budget exceeded; estimated support " + std::to_string(est_support) +
                              " entries at fold " + std::to_string(level));
    }

    RepTable cur = pts;
    for (int level = 2; level <= s; ++level) {
        RepTable next;
        JoinResult res = convolve_step(cur, pts, opts, &next);
        if (res.support > opts.max_table_entries)
            throw BudgetError("memory budget exceeded; support " + std::to_string(res.support));
        cur = std::move(next);
    }
    return cur;
}

}  // namespace pv
