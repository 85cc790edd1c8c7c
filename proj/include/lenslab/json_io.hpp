#ifndef LENSLAB_JSON_IO_HPP
#define LENSLAB_JSON_IO_HPP

#include <filesystem>

#include <json.hpp>

#include "lenslab/learner.hpp"
#include "lenslab/modelspace.hpp"

namespace lenslab {

using json = nlohmann::json;

// Parses a file; throws error(parse_error) with diagnostics.
json load_json(const std::filesystem::path& path);

// Strict object readers: unknown keys are rejected.
FinCat category_from_json(const json& j);
json category_to_json(const FinCat& c);

// A reference is either a relative path string or an inline object.
// `base` is the directory references are resolved against.
ParamFunctor pfunctor_from_json(const json& j, const std::filesystem::path& base);
json pfunctor_to_json(const ParamFunctor& pf);

// Lens files are either table lenses {"get":..., "put":[...]} or composition
// descriptors {"compose":"seq"|"par", "components":[path, path]}.
AlaLens lens_from_json(const json& j, const std::filesystem::path& base);
// Materializes the full put table over the admissible domain.
json lens_to_json(const AlaLens& lens);

Functor functor_from_json(const json& j, std::shared_ptr<const FinCat> source,
                          std::shared_ptr<const FinCat> target);

Scenario scenario_from_json(const json& j);
json delta_to_json(const ModelDelta& d);
json model_to_json(const RelModel& m);

// When `init` is non-null it receives the flattened initial parameter vector
// from the layer weights.
LearnerLens learner_from_json(const json& j, Vec* init = nullptr);
Vec vec_from_json(const json& j);

// Dispatches on the key set of a parsed artifact.
enum class FileKind { category, pfunctor, lens, scenario, learner };
FileKind detect_file_kind(const json& j);

}  // namespace lenslab

#endif
