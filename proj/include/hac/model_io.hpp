#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "hac/model.hpp"

namespace hac
{

/// Model document: fields alphabet, positional, layers, acceptance, precision,
/// metadata, in that order. Numbers in maps and t are canonical rational
/// strings. Unknown fields are rejected with format_error.
nlohmann::ordered_json model_to_json( const encoder_model& model );
encoder_model model_from_json( const nlohmann::ordered_json& doc );

std::string model_to_string( const encoder_model& model );
encoder_model model_from_string( const std::string& text );

void save_model( const encoder_model& model, const std::filesystem::path& path );
encoder_model load_model( const std::filesystem::path& path );

} // namespace hac
