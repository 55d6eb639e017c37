#include "cachecraft/io.hpp"

#include <fstream>
#include <sstream>

#include "cachecraft/errors.hpp"

namespace cachecraft {

namespace {

template <typename T>
T get_field(const Json& j, const char* key) {
  if (!j.contains(key)) throw ValidationError(key, std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw ValidationError(key, std::string("field \"") + key + "\" has the wrong type");
  }
}

std::vector<double> real_list(const Json& j, const char* key) {
  return get_field<std::vector<double>>(j, key);
}

}  // namespace

SystemConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("config", "config must be a JSON object");
  const int K = get_field<int>(j, "K");
  const int N = get_field<int>(j, "N");
  if (K < 1) throw ValidationError("K", "K must be a positive integer");
  if (N < 1) throw ValidationError("N", "N must be a positive integer");

  std::vector<double> F = j.contains("F") ? real_list(j, "F") : std::vector<double>(N, 1.0);
  if (static_cast<int>(F.size()) != N) throw ValidationError("F", "F must have N entries");

  std::vector<double> p;
  if (j.contains("p")) {
    p = real_list(j, "p");
  } else if (j.contains("zipf_s")) {
    p = zipf_popularities(N, get_field<double>(j, "zipf_s"));
  } else {
    p.assign(N, 1.0 / N);
  }
  if (static_cast<int>(p.size()) != N) throw ValidationError("p", "p must have N entries");

  std::optional<CacheClasses> classes;
  if (j.contains("classes") && !j.at("classes").is_null()) {
    const Json& c = j.at("classes");
    if (!c.is_object()) throw ValidationError("classes", "classes must be an object");
    CacheClasses cc;
    try {
      cc.small_users = get_field<int>(c, "K_S");
      cc.small_size = get_field<double>(c, "M_S");
      cc.large_size = get_field<double>(c, "M_L");
    } catch (const ValidationError& e) {
      throw ValidationError("classes." + e.field(), e.what());
    }
    classes = cc;
  }

  std::vector<double> M;
  if (j.contains("M")) {
    const Json& m = j.at("M");
    if (m.is_number()) {
      M.assign(K, m.get<double>());
    } else {
      M = real_list(j, "M");
    }
  } else if (classes) {
    return SystemConfig::with_classes(K, std::move(F), std::move(p), *classes);
  } else {
    throw ValidationError("M", "missing field \"M\"");
  }
  if (static_cast<int>(M.size()) != K) throw ValidationError("M", "M must have K entries");
  return SystemConfig(K, std::move(F), std::move(p), std::move(M), classes);
}

Json config_to_json(const SystemConfig& cfg) {
  Json j;
  j["K"] = cfg.num_users();
  j["N"] = cfg.num_files();
  j["F"] = cfg.file_lengths();
  j["p"] = cfg.popularities();
  j["M"] = cfg.cache_sizes();
  if (cfg.classes()) {
    j["classes"] = {{"K_S", cfg.classes()->small_users},
                    {"M_S", cfg.classes()->small_size},
                    {"M_L", cfg.classes()->large_size}};
  }
  return j;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error("parse error in " + path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed for " + path.string());
}

SystemConfig load_config(const std::filesystem::path& path) {
  return config_from_json(read_json_file(path));
}

void save_config(const SystemConfig& cfg, const std::filesystem::path& path) {
  write_text_file(path, config_to_json(cfg).dump(2) + "\n");
}

Json placement_to_json(const Placement& pl) {
  Json j;
  j["K"] = pl.num_users();
  j["N"] = pl.num_files();
  Json files = Json::array();
  const auto order = canonical_subsets(pl.num_users());
  for (int l = 0; l < pl.num_files(); ++l) {
    Json f = Json::object();
    for (UserSet s : order) {
      if (pl.size(l, s) != 0.0) f[subset_key(s)] = pl.size(l, s);
    }
    files.push_back(std::move(f));
  }
  j["subfiles"] = std::move(files);
  Json mu = Json::array();
  for (int k = 0; k < pl.num_users(); ++k) {
    std::vector<double> row(pl.num_files());
    for (int l = 0; l < pl.num_files(); ++l) row[l] = pl.cache_share(k, l);
    mu.push_back(row);
  }
  j["mu"] = std::move(mu);
  return j;
}

Placement placement_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("placement", "placement must be a JSON object");
  const int K = get_field<int>(j, "K");
  const int N = get_field<int>(j, "N");
  if (K < 1 || K > kMaxUsers) throw ValidationError("K", "invalid user count");
  if (N < 1) throw ValidationError("N", "invalid file count");
  Placement pl(K, N);
  const Json& files = j.at("subfiles");
  if (!files.is_array() || static_cast<int>(files.size()) != N) {
    throw ValidationError("subfiles", "subfiles must list one object per file");
  }
  for (int l = 0; l < N; ++l) {
    if (!files[l].is_object()) throw ValidationError("subfiles", "subfile entry must be an object");
    for (const auto& [key, value] : files[l].items()) {
      if (!value.is_number()) throw ValidationError("subfiles", "subfile size must be a number");
      pl.set_size(l, parse_subset_key(key, K), value.get<double>());
    }
  }
  if (j.contains("mu")) {
    const Json& mu = j.at("mu");
    if (!mu.is_array() || static_cast<int>(mu.size()) != K) {
      throw ValidationError("mu", "mu must have one row per user");
    }
    for (int k = 0; k < K; ++k) {
      if (!mu[k].is_array() || static_cast<int>(mu[k].size()) != N) {
        throw ValidationError("mu", "each mu row must have N entries");
      }
      for (int l = 0; l < N; ++l) pl.set_cache_share(k, l, mu[k][l].get<double>());
    }
  } else {
    pl.set_shares_from_sizes();
  }
  return pl;
}

Placement load_placement(const std::filesystem::path& path) {
  return placement_from_json(read_json_file(path));
}

Json grouped_to_json(const GroupedScheme& gs) {
  auto rows = [](const Eigen::MatrixXd& m) {
    Json out = Json::array();
    for (int r = 0; r < m.rows(); ++r) {
      std::vector<double> row(m.cols());
      for (int c = 0; c < m.cols(); ++c) row[c] = m(r, c);
      out.push_back(row);
    }
    return out;
  };
  Json j;
  j["kind"] = to_string(gs.kind());
  j["K"] = gs.num_users();
  if (!gs.has_classes()) {
    j["v"] = gs.kind() == SchemeKind::homogeneous ? rows(gs.small())[0] : rows(gs.small());
    return j;
  }
  j["K_S"] = gs.small_users();
  const bool single = gs.kind() == SchemeKind::two_tier;
  j["small"] = single ? rows(gs.small())[0] : rows(gs.small());
  j["large"] = single ? rows(gs.large())[0] : rows(gs.large());
  j["mixed"] = single ? rows(gs.mixed())[0] : rows(gs.mixed());
  return j;
}

}  // namespace cachecraft
