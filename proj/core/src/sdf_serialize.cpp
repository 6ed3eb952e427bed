#include "sdt/sdf/serialize.hpp"

#include "sdt/nnet.hpp"
#include "sdt/sdf/bernstein.hpp"
#include "sdt/sdf/mlp_field.hpp"
#include "sdt/sdf/primitives.hpp"

#include <nlohmann/json.hpp>

#include <fstream>

namespace sdt::sdf {

namespace {

nlohmann::json vec_json(const Eigen::Vector2d& v) { return nlohmann::json::array({v.x(), v.y()}); }

Eigen::Vector2d vec2_of(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2) throw std::runtime_error("sdf json: expected [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

nlohmann::json field_to_json(const SdfField& field) {
  nlohmann::json j;
  j["format_version"] = 1;
  if (const auto* c = dynamic_cast<const CircleSdf*>(&field)) {
    j["type"] = "circle";
    j["center"] = vec_json(c->center);
    j["radius"] = c->radius;
  } else if (const auto* b = dynamic_cast<const BoxSdf*>(&field)) {
    j["type"] = "box";
    j["center"] = vec_json(b->center);
    j["half_extents"] = vec_json(b->half_extents);
  } else if (const auto* t = dynamic_cast<const TriangleSdf*>(&field)) {
    j["type"] = "triangle";
    j["vertices"] = nlohmann::json::array({vec_json(t->a), vec_json(t->b), vec_json(t->c)});
  } else if (const auto* a = dynamic_cast<const ArcSdf*>(&field)) {
    j["type"] = "arc";
    j["center"] = vec_json(a->center);
    j["radius"] = a->radius;
    j["angle0"] = a->angle0;
    j["angle1"] = a->angle1;
    j["thickness"] = a->thickness;
  } else if (const auto* c = dynamic_cast<const CapsuleSdf*>(&field)) {
    j["type"] = "capsule";
    j["a"] = vec_json(c->a);
    j["b"] = vec_json(c->b);
    j["radius"] = c->radius;
  } else if (const auto* h = dynamic_cast<const HalfPlaneSdf*>(&field)) {
    j["type"] = "half_plane";
    j["normal"] = std::vector<double>(h->normal.data(), h->normal.data() + h->normal.size());
    j["offset"] = h->offset;
  } else if (const auto* u = dynamic_cast<const UnionSdf*>(&field)) {
    j["type"] = "union";
    j["parts"] = nlohmann::json::array();
    for (const auto& p : u->parts()) j["parts"].push_back(field_to_json(*p));
  } else if (const auto* m = dynamic_cast<const MlpSdf*>(&field)) {
    j["type"] = "mlp";
    j["net"] = nlohmann::json::parse(nnet::checkpoint_json(m->net()));
  } else if (const auto* bp = dynamic_cast<const BernsteinSdf*>(&field)) {
    j["type"] = "bernstein";
    j["degree"] = bp->degree();
    j["lo"] = std::vector<double>{bp->bounds().lo[0], bp->bounds().lo[1]};
    j["hi"] = std::vector<double>{bp->bounds().hi[0], bp->bounds().hi[1]};
    const Mat& c = bp->coefficients();
    std::vector<double> flat(c.size());
    for (Eigen::Index r = 0; r < c.rows(); ++r)
      for (Eigen::Index col = 0; col < c.cols(); ++col) flat[r * c.cols() + col] = c(r, col);
    j["coefficients"] = flat;
  } else {
    throw std::runtime_error("field_to_json: unsupported field type " + field.kind());
  }
  return j;
}

FieldPtr field_from_json(const nlohmann::json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "circle") return std::make_shared<CircleSdf>(vec2_of(j.at("center")), j.at("radius").get<double>());
  if (type == "box")
    return std::make_shared<BoxSdf>(vec2_of(j.at("center")), vec2_of(j.at("half_extents")));
  if (type == "triangle") {
    const auto& v = j.at("vertices");
    return std::make_shared<TriangleSdf>(vec2_of(v.at(0)), vec2_of(v.at(1)), vec2_of(v.at(2)));
  }
  if (type == "arc")
    return std::make_shared<ArcSdf>(vec2_of(j.at("center")), j.at("radius").get<double>(),
                                    j.at("angle0").get<double>(), j.at("angle1").get<double>(),
                                    j.at("thickness").get<double>());
  if (type == "capsule")
    return std::make_shared<CapsuleSdf>(vec2_of(j.at("a")), vec2_of(j.at("b")), j.at("radius").get<double>());
  if (type == "half_plane") {
    const auto n = j.at("normal").get<std::vector<double>>();
    return std::make_shared<HalfPlaneSdf>(
        Eigen::Map<const StateVec>(n.data(), static_cast<Eigen::Index>(n.size())), j.at("offset").get<double>());
  }
  if (type == "union") {
    std::vector<FieldPtr> parts;
    for (const auto& pj : j.at("parts")) parts.push_back(field_from_json(pj));
    return std::make_shared<UnionSdf>(std::move(parts));
  }
  if (type == "mlp") return std::make_shared<MlpSdf>(nnet::mlp_from_checkpoint_json(j.at("net").dump()));
  if (type == "bernstein") {
    const int degree = j.at("degree").get<int>();
    Bounds b;
    const auto lo = j.at("lo").get<std::vector<double>>();
    const auto hi = j.at("hi").get<std::vector<double>>();
    b.lo = Eigen::Map<const StateVec>(lo.data(), static_cast<Eigen::Index>(lo.size()));
    b.hi = Eigen::Map<const StateVec>(hi.data(), static_cast<Eigen::Index>(hi.size()));
    const auto flat = j.at("coefficients").get<std::vector<double>>();
    const int m = degree + 1;
    if (static_cast<int>(flat.size()) != m * m) throw std::runtime_error("bernstein json: coefficient count mismatch");
    Mat c(m, m);
    for (int r = 0; r < m; ++r)
      for (int col = 0; col < m; ++col) c(r, col) = flat[r * m + col];
    return std::make_shared<BernsteinSdf>(degree, std::move(b), std::move(c));
  }
  throw std::runtime_error("field_from_json: unknown type '" + type + "'");
}

void save_field(const SdfField& field, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
  os << field_to_json(field).dump(2);
}

FieldPtr load_field(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open: " + path.string());
  nlohmann::json j;
  is >> j;
  return field_from_json(j);
}

}  // namespace sdt::sdf
