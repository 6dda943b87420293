#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mhdflow/families.hpp"
#include "mhdflow/flowmap.hpp"

namespace mhdflow {

struct BogoyavlenskijStep {
  std::string phi;
};

struct TranslateStep {
  std::string psi;
  std::string chi;
};

using TransformStep = std::variant<BogoyavlenskijStep, TranslateStep>;

/// Defaults for the current-sheet subcommand.
struct SheetDefaults {
  double c = 0.0;
  double phi_minus = 1.0;
  double phi_plus = 1.0;
};

/// A scene document: family spec, optional transform chain, metadata.
struct SceneFile {
  std::string name;
  std::string description;
  SceneSpec spec;
  std::vector<TransformStep> transforms;
  std::optional<SheetDefaults> current_sheet;
};

/// Strict parse: unknown keys, missing or surplus family fields, malformed
/// expressions and inverted intervals all throw SchemaError.
SceneFile parse_scene(std::string_view json_text);
SceneFile load_scene(const std::filesystem::path& path);

std::string to_json(const SceneFile& scene, int indent = 2);

/// Family map with the transform chain applied in order.
FlowMap build_scene(const SceneFile& scene);

}  // namespace mhdflow
