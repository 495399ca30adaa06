#pragma once

#include "voltaic/model/builder.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace voltaic {

/// A model parameter a scenario can override. Series parameters take the
/// name of a time series instead of a number.
struct ParameterInfo {
    std::string name;
    std::vector<std::string> dims; // e.g. {"n","sto"}
    bool is_series = false;
    std::string unit;
};

const std::vector<ParameterInfo>& parameter_catalogue();
const ParameterInfo* find_parameter(std::string_view name);

/// Elements of a set ("n", "tech", "sto", "l", "h") in the data.
std::vector<std::string> set_elements(const SystemData& data, const ModelConfig& config, std::string_view set);

/// True when the tuple names an existing record of the parameter (e.g. the
/// technology is actually available at that node).
bool parameter_exists(const SystemData& data, std::string_view name, const Tuple& tuple);

double get_parameter(const SystemData& data, const ModelConfig& config, std::string_view name, const Tuple& tuple);
void set_parameter(SystemData& data, ModelConfig& config, std::string_view name, const Tuple& tuple, double value);
void set_series_reference(SystemData& data, std::string_view name, const Tuple& tuple, const std::string& series);

/// Updates that carry one parameter record's current value (read from
/// `effective`) into a built LP: objective coefficients, bounds, rhs or
/// matrix coefficients, whichever the parameter feeds.
std::vector<LpUpdate> parameter_updates(const LinearProgram& lp, const SystemData& effective,
                                        const ModelConfig& config, const ConstraintChoices& choices,
                                        std::string_view name, const Tuple& tuple);

} // namespace voltaic
