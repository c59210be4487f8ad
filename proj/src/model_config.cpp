#include "regime_fx/model_config.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "regime_fx/errors.hpp"

namespace regime_fx {
namespace {

Vector read_vector(const YAML::Node& root, const std::string& key) {
  const YAML::Node node = root[key];
  if (!node || !node.IsSequence()) {
    throw InputError("model config: '" + key + "' must be a list of numbers");
  }
  Vector v(static_cast<Eigen::Index>(node.size()));
  for (std::size_t i = 0; i < node.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = node[i].as<double>();
  }
  return v;
}

Matrix read_matrix(const YAML::Node& root, const std::string& key) {
  const YAML::Node node = root[key];
  if (!node || !node.IsSequence() || node.size() == 0) {
    throw InputError("model config: '" + key + "' must be a list of rows");
  }
  const auto n = node.size();
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(node[0].size()));
  for (std::size_t i = 0; i < n; ++i) {
    if (!node[i].IsSequence() || node[i].size() != node[0].size()) {
      throw InputError("model config: '" + key + "' rows must have equal length");
    }
    for (std::size_t j = 0; j < node[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = node[i][j].as<double>();
    }
  }
  return m;
}

MarkovRegimeModel chain_from(const YAML::Node& root) {
  std::optional<Vector> initial;
  if (root["initial_distribution"]) initial = read_vector(root, "initial_distribution");

  if (root["generator"]) {
    Matrix g = read_matrix(root, "generator");
    return initial ? MarkovRegimeModel(std::move(g), *initial) : MarkovRegimeModel(std::move(g));
  }
  if (root["transition_matrix"]) {
    if (!root["bar_interval"]) {
      throw InputError("model config: 'transition_matrix' needs 'bar_interval' (years)");
    }
    const MarkovRegimeModel embedded =
        embed_generator(read_matrix(root, "transition_matrix"), root["bar_interval"].as<double>());
    return initial ? MarkovRegimeModel(embedded.generator(), *initial) : embedded;
  }
  throw InputError("model config: expected 'generator' or 'transition_matrix'");
}

YAML::Node parse_yaml(const std::string& text) {
  try {
    return YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw InputError(std::string("model config: ") + e.what());
  }
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

ModelInputs parse_model_config(const std::string& yaml_text) {
  const YAML::Node root = parse_yaml(yaml_text);
  try {
    MarkovRegimeModel chain = chain_from(root);
    RegimeParameters params{read_vector(root, "mu"), read_vector(root, "sigma"),
                            read_vector(root, "lambda"), read_vector(root, "r_d"),
                            read_vector(root, "r_f")};
    params.validate(chain.n_states());
    return ModelInputs{std::move(params), std::move(chain)};
  } catch (const YAML::Exception& e) {
    throw InputError(std::string("model config: ") + e.what());
  }
}

ModelInputs load_model_config(const std::string& path) { return parse_model_config(slurp(path)); }

MarkovRegimeModel parse_chain_config(const std::string& yaml_text) {
  try {
    return chain_from(parse_yaml(yaml_text));
  } catch (const YAML::Exception& e) {
    throw InputError(std::string("chain config: ") + e.what());
  }
}

MarkovRegimeModel load_chain_config(const std::string& path) {
  return parse_chain_config(slurp(path));
}

ModelInputs illustrative_model() {
  Matrix p(3, 3);
  p << 0.4408, 0.4527, 0.1065,
       0.4818, 0.4149, 0.1033,
       0.4820, 0.4119, 0.1061;
  RegimeParameters params;
  params.mu = Vector{{0.03, -0.02, 0.0}};
  params.sigma = Vector{{0.12, 0.15, 0.08}};
  params.lambda = Vector{{1.0, 2.0, 0.5}};
  params.r_d = Vector::Constant(3, 0.02);
  params.r_f = Vector::Constant(3, 0.01);
  return ModelInputs{std::move(params), embed_generator(p, 1.0 / 252.0)};
}

void write_chain_config(std::ostream& out, const MarkovRegimeModel& chain,
                        const TransitionEstimate* estimate) {
  const auto row = [&](auto&& values, Eigen::Index n) {
    out << '[';
    for (Eigen::Index j = 0; j < n; ++j) out << (j ? ", " : "") << values(j);
    out << ']';
  };
  out << std::setprecision(17);
  if (estimate != nullptr) {
    out << "# transition counts (up, down, sideway)\n# counts: [";
    for (std::size_t i = 0; i < 3; ++i) {
      out << (i ? ", " : "") << '[' << estimate->counts[i][0] << ", " << estimate->counts[i][1]
          << ", " << estimate->counts[i][2] << ']';
    }
    out << "]\n";
    out << "bar_interval: " << estimate->bar_interval << '\n';
    out << "transition_matrix:\n";
    for (Eigen::Index i = 0; i < 3; ++i) {
      out << "  - ";
      row(estimate->matrix.row(i), 3);
      out << '\n';
    }
  }
  const auto n = static_cast<Eigen::Index>(chain.n_states());
  out << "generator:\n";
  for (Eigen::Index i = 0; i < n; ++i) {
    out << "  - ";
    row(chain.generator().row(i), n);
    out << '\n';
  }
  out << "initial_distribution: ";
  row(chain.initial_distribution(), n);
  out << '\n';
}

}  // namespace regime_fx
