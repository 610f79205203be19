#pragma once

#include <string_view>

// Prompt templates compiled from data/prompts/*.txt.
namespace llm4tg::harness::assets {

extern const std::string_view level1_system;
extern const std::string_view level1_instructions;
extern const std::string_view level2_system;
extern const std::string_view level2_instructions;
extern const std::string_view level3_system;
extern const std::string_view level3_instructions;

}  // namespace llm4tg::harness::assets
