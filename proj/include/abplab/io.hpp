#pragma once

// JSON input for spaces, regions, measures and scalar fields. Configs and
// space files are read with nlohmann::json; all report output goes through
// the deterministic writer in report.hpp.

#include "abplab/abpverify.hpp"
#include "abplab/contact.hpp"
#include "abplab/expr.hpp"
#include "abplab/mmspace.hpp"
#include "abplab/report.hpp"
#include "abplab/transport.hpp"

#include <json.hpp>

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace abplab {

using json = nlohmann::json;

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& message) : std::runtime_error(message) {}
};

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError("file '" + path + "': " + e.what());
    }
    return j;
}

/// Space file format: { "points": [...], "dist": [[...]], "mass": [...],
/// "edges": [[i,j,w],...], "coords": optional, "complete_shortest_paths":
/// optional bool }.
inline DiscreteMMSpace parse_space_file(const json& j) {
    if (!j.contains("dist") || !j.contains("mass"))
        throw ConfigError("space file: fields 'dist' and 'mass' are required");
    std::vector<std::vector<double>> dist;
    for (const auto& row : j.at("dist")) dist.push_back(row.get<std::vector<double>>());
    const auto mass = j.at("mass").get<std::vector<double>>();
    std::vector<Edge> edges;
    if (j.contains("edges")) {
        for (const auto& e : j.at("edges")) {
            if (!e.is_array() || e.size() != 3)
                throw ConfigError("space file: each edge must be [i, j, weight]");
            edges.push_back({e[0].get<PointId>(), e[1].get<PointId>(), e[2].get<double>()});
        }
    }
    std::vector<std::vector<double>> coords;
    if (j.contains("coords"))
        for (const auto& c : j.at("coords")) coords.push_back(c.get<std::vector<double>>());
    const bool complete = j.value("complete_shortest_paths", false);
    if (j.contains("points") && j.at("points").size() != mass.size())
        throw ConfigError("space file: 'points' length disagrees with 'mass'");
    try {
        return DiscreteMMSpace::from_data(std::move(dist), std::move(mass), std::move(edges),
                                          std::move(coords), complete);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("space file: ") + e.what());
    }
}

/// Model descriptor or file reference:
///   {"model":"interval","a":..,"b":..,"n":..} | {"model":"circle","n":..}
///   {"model":"grid","extent":[[lo,hi],..],"h":..}
///   {"model":"sphere","n_lat":..,"n_lon":..} | {"file": "space.json"}
inline DiscreteMMSpace parse_space(const json& j) {
    if (!j.is_object()) throw ConfigError("space: descriptor must be an object");
    if (j.contains("file")) return parse_space_file(load_json_file(j.at("file")));
    const std::string model = j.value("model", "");
    try {
        if (model == "interval") {
            if (!j.contains("n")) throw ConfigError("space: interval needs field 'n'");
            return DiscreteMMSpace::interval(j.value("a", 0.0), j.value("b", 1.0),
                                             j.at("n").get<std::size_t>());
        }
        if (model == "circle") {
            if (!j.contains("n")) throw ConfigError("space: circle needs field 'n'");
            return DiscreteMMSpace::circle(j.at("n").get<std::size_t>());
        }
        if (model == "grid") {
            if (!j.contains("extent") || !j.contains("h"))
                throw ConfigError("space: grid needs fields 'extent' and 'h'");
            std::vector<std::array<double, 2>> extent;
            for (const auto& e : j.at("extent")) {
                if (!e.is_array() || e.size() != 2)
                    throw ConfigError("space: each extent entry must be [lo, hi]");
                extent.push_back({e[0].get<double>(), e[1].get<double>()});
            }
            return DiscreteMMSpace::euclidean_grid(extent, j.at("h").get<double>());
        }
        if (model == "sphere") {
            if (!j.contains("n_lat") || !j.contains("n_lon"))
                throw ConfigError("space: sphere needs fields 'n_lat' and 'n_lon'");
            return DiscreteMMSpace::sphere2_grid(j.at("n_lat").get<std::size_t>(),
                                                 j.at("n_lon").get<std::size_t>());
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("space: ") + e.what());
    }
    throw ConfigError("space: unknown model '" + model + "' (and no 'file' given)");
}

/// Region descriptor. One of:
///   {"indices":[...]} | {"box":[[lo,hi],..]} (strict open per axis)
///   {"ball":{"center":[...],"radius":r}} (strict) | {"interior":true} | {"all":true}
inline Region parse_region(const json& j, const DiscreteMMSpace& space,
                           RegionKind kind = RegionKind::VertexSet) {
    if (!j.is_object()) throw ConfigError("region: descriptor must be an object");
    if (j.contains("indices")) {
        auto ids = j.at("indices").get<std::vector<PointId>>();
        for (PointId p : ids)
            if (p >= space.size())
                throw ConfigError("region: index " + std::to_string(p) + " out of range");
        return Region::of(std::move(ids), kind);
    }
    if (j.contains("all") && j.at("all").get<bool>()) {
        Region r = whole_space(space);
        r.kind = kind;
        return r;
    }
    if (j.contains("interior") && j.at("interior").get<bool>()) {
        std::vector<PointId> ids;
        for (PointId p = 0; p < space.size(); ++p)
            if (space.interior(p)) ids.push_back(p);
        return Region::of(std::move(ids), kind);
    }
    if (j.contains("box")) {
        const auto& box = j.at("box");
        if (box.size() > space.dim())
            throw ConfigError("region: box has more axes than the space");
        std::vector<PointId> ids;
        for (PointId p = 0; p < space.size(); ++p) {
            bool inside = true;
            for (std::size_t d = 0; d < box.size() && inside; ++d) {
                const double lo = box[d][0].get<double>(), hi = box[d][1].get<double>();
                const double x = space.coord(p, d);
                inside = x > lo && x < hi;
            }
            if (inside) ids.push_back(p);
        }
        if (ids.empty()) throw ConfigError("region: box selects no nodes");
        return Region::of(std::move(ids), kind);
    }
    if (j.contains("ball")) {
        const auto& ball = j.at("ball");
        if (!ball.contains("center") || !ball.contains("radius"))
            throw ConfigError("region: ball needs 'center' and 'radius'");
        const auto center = ball.at("center").get<std::vector<double>>();
        if (center.size() != space.dim())
            throw ConfigError("region: ball center dimension mismatch");
        const double radius = ball.at("radius").get<double>();
        std::vector<PointId> ids;
        for (PointId p = 0; p < space.size(); ++p) {
            double acc = 0.0;
            for (std::size_t d = 0; d < center.size(); ++d) {
                const double dd = space.coord(p, d) - center[d];
                acc += dd * dd;
            }
            if (acc < radius * radius) ids.push_back(p);
        }
        if (ids.empty()) throw ConfigError("region: ball selects no nodes");
        return Region::of(std::move(ids), kind);
    }
    throw ConfigError(
        "region: expected one of 'indices', 'box', 'ball', 'interior', 'all'");
}

/// Scalar field: {"expr":"..."} | {"values":[...]} | {"file": path} |
/// {"signed_distance_of": regionspec}.
inline ScalarField parse_field(const json& j, const DiscreteMMSpace& space) {
    if (!j.is_object()) throw ConfigError("u: descriptor must be an object");
    ScalarField u;
    if (j.contains("expr")) {
        Expression e = [&] {
            try {
                return Expression::parse(j.at("expr").get<std::string>());
            } catch (const std::invalid_argument& err) {
                throw ConfigError(std::string("u: ") + err.what());
            }
        }();
        u.values.resize(space.size());
        try {
            for (PointId p = 0; p < space.size(); ++p) u.values[p] = e.eval(space.coords(p));
        } catch (const std::invalid_argument& err) {
            throw ConfigError(std::string("u: ") + err.what());
        }
        return u;
    }
    if (j.contains("values")) {
        u.values = j.at("values").get<std::vector<double>>();
        if (u.values.size() != space.size())
            throw ConfigError("u: values length disagrees with the space size");
        return u;
    }
    if (j.contains("file")) {
        const json data = load_json_file(j.at("file"));
        u.values = data.get<std::vector<double>>();
        if (u.values.size() != space.size())
            throw ConfigError("u: field file length disagrees with the space size");
        return u;
    }
    if (j.contains("signed_distance_of")) {
        const Region omega =
            parse_region(j.at("signed_distance_of"), space, RegionKind::OpenDomain);
        return signed_distance(space, omega);
    }
    throw ConfigError("u: expected one of 'expr', 'values', 'file', 'signed_distance_of'");
}

/// Probability measure: {"uniform": regionspec} | {"dirac": id} |
/// {"weights": [...]} | {"density_expr": "..."} (taken against node masses).
inline ProbMeasure parse_measure(const json& j, const DiscreteMMSpace& space) {
    if (!j.is_object()) throw ConfigError("measure: descriptor must be an object");
    try {
        if (j.contains("uniform"))
            return ProbMeasure::uniform_on(space, parse_region(j.at("uniform"), space));
        if (j.contains("dirac")) return ProbMeasure::dirac(space, j.at("dirac").get<PointId>());
        if (j.contains("weights")) {
            auto w = j.at("weights").get<std::vector<double>>();
            return ProbMeasure::from_weights(space, std::move(w));
        }
        if (j.contains("density_expr")) {
            const Expression e = Expression::parse(j.at("density_expr").get<std::string>());
            std::vector<double> w(space.size());
            double sum = 0.0;
            for (PointId p = 0; p < space.size(); ++p) {
                const double rho = e.eval(space.coords(p));
                if (rho < 0.0)
                    throw ConfigError("measure: density_expr is negative at node " +
                                      std::to_string(p));
                w[p] = rho * space.mass(p);
                sum += w[p];
            }
            if (!(sum > 0.0)) throw ConfigError("measure: density_expr integrates to zero");
            for (double& v : w) v /= sum;
            double s2 = 0.0;
            for (double v : w) s2 += v;
            for (double& v : w) v /= s2;
            return ProbMeasure::from_weights(space, std::move(w));
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("measure: ") + e.what());
    }
    throw ConfigError(
        "measure: expected one of 'uniform', 'dirac', 'weights', 'density_expr'");
}

/// Deterministic serialization of a space in the space file format.
inline Json space_to_json(const DiscreteMMSpace& space) {
    Json::Array points, dist, mass, edges, coords;
    for (PointId p = 0; p < space.size(); ++p) {
        points.emplace_back(p);
        mass.emplace_back(space.mass(p));
        Json::Array row;
        for (PointId q = 0; q < space.size(); ++q) row.emplace_back(space.dist(p, q));
        dist.emplace_back(std::move(row));
        if (space.dim() > 0) coords.emplace_back(Json::array_of(space.coords(p)));
    }
    for (const Edge& e : space.edges()) {
        Json::Array entry = {Json(e.a), Json(e.b), Json(e.weight)};
        edges.emplace_back(std::move(entry));
    }
    Json out;
    out["points"] = Json(std::move(points));
    out["dist"] = Json(std::move(dist));
    out["mass"] = Json(std::move(mass));
    out["edges"] = Json(std::move(edges));
    if (space.dim() > 0) out["coords"] = Json(std::move(coords));
    return out;
}

}  // namespace abplab
