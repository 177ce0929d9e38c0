#include "iclust/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <sstream>

#include "iclust/error.hpp"

namespace iclust {

std::string_view to_string(InitMethod m) {
    switch (m) {
        case InitMethod::ward:
            return "ward";
        case InitMethod::complete:
            return "complete";
        case InitMethod::single:
            return "single";
        case InitMethod::kmeans:
            return "kmeans";
        case InitMethod::external:
            return "external";
    }
    return "?";
}

std::optional<InitMethod> parse_init_method(std::string_view s) {
    for (auto m : {InitMethod::ward, InitMethod::complete, InitMethod::single, InitMethod::kmeans, InitMethod::external}) {
        if (s == to_string(m)) {
            return m;
        }
    }
    return std::nullopt;
}

std::size_t KInitRule::resolve(std::size_t n) const {
    switch (kind) {
        case Kind::log_factor:
            return default_k_init(n, factor);
        case Kind::quarter:
            return std::clamp<std::size_t>((n + 3) / 4, 1, n);
        case Kind::fixed:
            return std::clamp<std::size_t>(fixed, 1, n);
    }
    return 1;
}

std::string KInitRule::describe() const {
    std::ostringstream s;
    switch (kind) {
        case Kind::log_factor:
            s << factor << "*ln(n)";
            break;
        case Kind::quarter:
            s << "n/4";
            break;
        case Kind::fixed:
            s << fixed;
            break;
    }
    return s.str();
}

KInitRule KInitRule::parse(std::string_view s) {
    KInitRule r;
    if (s == "auto") {
        return r;
    }
    if (s == "n/4") {
        r.kind = Kind::quarter;
        return r;
    }
    if (s.size() > 3 && s.substr(s.size() - 3) == "log") {
        double f = 0.0;
        const auto body = s.substr(0, s.size() - 3);
        auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), f);
        if (ec != std::errc() || ptr != body.data() + body.size() || !(f > 0.0) || !std::isfinite(f)) {
            throw Error("invalid k_init factor '" + std::string(s) + "'");
        }
        r.factor = f;
        return r;
    }
    std::size_t k = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), k);
    if (ec != std::errc() || ptr != s.data() + s.size() || k == 0) {
        throw Error("invalid k_init '" + std::string(s) + "' (use auto, <f>log, n/4 or a positive integer)");
    }
    r.kind = Kind::fixed;
    r.fixed = k;
    return r;
}

Partition initial_partition(const DataMatrix& data, const DistanceMatrix& dm, std::size_t k,
                            const PipelineConfig& config) {
    const std::size_t n = data.rows();
    switch (config.init) {
        case InitMethod::ward:
        case InitMethod::complete:
        case InitMethod::single: {
            if (n == 1) {
                return Partition(std::vector<ClusterId>{0});
            }
            const auto linkage = config.init == InitMethod::ward       ? Linkage::ward
                                 : config.init == InitMethod::complete ? Linkage::complete
                                                                       : Linkage::single;
            return cut(hierarchical(dm, linkage), k);
        }
        case InitMethod::kmeans:
            return kmeans(data, k, config.seed, config.kmeans_max_iter).partition;
        case InitMethod::external:
            if (!config.external_partition) {
                throw Error("external initialization requires a partition file");
            }
            if (config.external_partition->size() != n) {
                throw Error("external partition covers " + std::to_string(config.external_partition->size()) +
                            " rows, data has " + std::to_string(n));
            }
            return *config.external_partition;
    }
    throw Error("unknown initialization method");
}

PipelineResult run_pipeline(const DataMatrix& data, const PipelineConfig& config) {
    using clock = std::chrono::steady_clock;
    auto seconds_since = [](clock::time_point t0) {
        return std::chrono::duration<double>(clock::now() - t0).count();
    };
    PipelineResult res;
    DataMatrix work = data;
    if (config.standardize && data.rows() >= 2) {
        auto s = standardize(data);
        res.warnings = std::move(s.warnings);
        work = std::move(s.matrix);
    }

    auto t0 = clock::now();
    const DistanceMatrix dm = pairwise_distances(work);
    res.seconds_distances = seconds_since(t0);

    t0 = clock::now();
    res.k_init = config.init == InitMethod::external ? (config.external_partition ? config.external_partition->k() : 0)
                                                     : config.k_init.resolve(work.rows());
    res.initial = initial_partition(work, dm, res.k_init, config);
    res.k_init = res.initial.k();
    res.seconds_init = seconds_since(t0);

    t0 = clock::now();
    res.trace = run(dm, res.initial, config.merge);
    res.seconds_merge = seconds_since(t0);
    return res;
}

}  // namespace iclust
