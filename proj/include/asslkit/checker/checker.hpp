#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "asslkit/diagnostic.hpp"
#include "asslkit/syntax/ast.hpp"

namespace asslkit::checker {

inline constexpr int kSharedScope = -1;  // owner of ASIP messages and channels

struct FluentSymbol {
    std::size_t policy = 0;
    std::size_t fluent = 0;
};

/// Names visible inside one tier. Messages and channels map to indices of the
/// spec-wide lists in SymbolTable; the tier's own AEIP shadows the ASIP.
struct TierSymbols {
    std::string name;
    std::map<std::string, std::size_t> policies;
    std::map<std::string, std::size_t> actions;
    std::map<std::string, std::size_t> events;
    std::map<std::string, std::size_t> metrics;
    std::map<std::string, FluentSymbol> fluents;
    std::map<std::string, std::size_t> messages;
    std::map<std::string, std::size_t> channels;
};

struct MessageSymbol {
    std::string name;
    int owner = kSharedScope;  // tier index of the declaring AEIP
    std::size_t sender = 0;    // tier index
    std::size_t receiver = 0;  // tier index
    const syntax::MessageDecl* decl = nullptr;
};

struct ChannelSymbol {
    std::string name;
    int owner = kSharedScope;
    std::size_t capacity = 1;
    const syntax::ChannelDecl* decl = nullptr;
};

/// Tier index 0 is the AS tier; index i > 0 is ae_tiers[i - 1].
struct SymbolTable {
    std::vector<TierSymbols> tiers;
    std::vector<MessageSymbol> messages;
    std::vector<ChannelSymbol> channels;
    std::map<std::string, std::size_t> tier_index;

    std::optional<std::size_t> find_tier(const std::string& name) const;
};

const syntax::Tier& tier_at(const syntax::SpecificationTree& tree, std::size_t index);
std::size_t tier_count(const syntax::SpecificationTree& tree);

/// A tree that passed check_all, with its symbols. Copies share the tree, so
/// declaration pointers in the symbol table stay valid.
struct CheckedSpec {
    std::shared_ptr<const syntax::SpecificationTree> tree;
    SymbolTable symbols;
    std::vector<Diagnostic> warnings;

    const syntax::Tier& tier(std::size_t index) const { return tier_at(*tree, index); }
    std::size_t tier_count() const { return symbols.tiers.size(); }
};

struct ResolveResult {
    SymbolTable symbols;
    std::vector<Diagnostic> diagnostics;
};

/// Builds the symbol table and reports E-UNDEF / E-DUP. Declaration pointers refer
/// into `tree`, which must outlive the result.
ResolveResult resolve(const syntax::SpecificationTree& tree);

std::vector<Diagnostic> check_types(const syntax::SpecificationTree& tree, const SymbolTable& symbols);

/// Rules: overlapping fluent events, recursive calls, unmapped fluents, unraisable
/// events, channel capacity, timer periods, fluent-less policies.
std::vector<Diagnostic> check_semantics(const syntax::SpecificationTree& tree, const SymbolTable& symbols);

struct CheckResult {
    std::optional<CheckedSpec> spec;      // present iff no error diagnostics
    std::vector<Diagnostic> diagnostics;  // sorted, warnings included
};

CheckResult check_all(syntax::SpecificationTree tree);

/// Parse and check in one go; syntax errors come back as diagnostics.
CheckResult check_source(std::string_view source, const std::string& file = "<input>");

/// Throws std::runtime_error if the file cannot be read.
CheckResult check_file(const std::string& path);

}  // namespace asslkit::checker
