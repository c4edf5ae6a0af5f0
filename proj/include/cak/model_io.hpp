#pragma once

#include <string>

#include "json.hpp"

#include "cak/model.hpp"

namespace cak {

using Json = nlohmann::ordered_json;

Functor functor_from_json(const Json& j);
Json functor_to_json(const FunctorSpec& f);

TValue value_from_json(const FunctorSpec& f, const Carrier& c, const Json& j);
Json value_to_json(const FunctorSpec& f, const Carrier& c, const TValue& v);

TModel model_from_json(const Json& j);
Json model_to_json(const TModel& m);

TModel load_model(const std::string& path);
Json load_json(const std::string& path);
std::string read_file(const std::string& path);

}  // namespace cak
