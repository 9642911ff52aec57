#pragma once

/// @file textio.hpp
/// @brief The public textual grammars: shift groups, reflection spaces,
/// type labels, spec lines, root lines, window files, and report rendering
/// (human text and the structured schema-versioned document).

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "rootforge/lears.hpp"
#include "rootforge/qgroup.hpp"
#include "rootforge/report.hpp"
#include "rootforge/rootsys.hpp"

namespace rf::textio {

/// Parse failure with the offending position (0-based byte offset) and the
/// expected token spelled out in the message.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, size_t position)
      : std::runtime_error(message + " at position " +
                           std::to_string(position)),
        position_(position) {}
  size_t position() const { return position_; }

 private:
  size_t position_;
};

/// Groups: `Z`, `Z*<q>`, `Zloc(<p>)`, `Zinv(<q>)`, `trunc(<kind>,<depth>)`,
/// `0` (trivial).
QSubgroup parse_group(std::string_view text);

/// Reflection spaces over a known group: `G`, `<k>G`, `<k>G+{r1,r2,...}`
/// with the r_i given as group elements.
ReflectionSpace parse_reflection_space(std::string_view text,
                                       const QSubgroup& group);

/// Type labels: `A3`, `B2`, `BC1`, `D4`, `E6`, `E7`, `E8`, `F4`, `G2`.
/// For family A the number is the index size (classical rank + 1).
RootSystemDesc parse_type_label(std::string_view text);

/// Spec lines: `type=BC2 group=Z S=G L=2G+{0} E=2G+{1} window=4`;
/// L, E, window, reduced are optional (reduced is derived when absent).
struct SpecLine {
  LearsSpec spec;
  std::optional<Rat> window;
};
SpecLine parse_spec_line(std::string_view line);
std::string print_spec_line(const LearsSpec& spec,
                            const std::optional<Rat>& window = {});

/// Root lines: `eps:{i:q,...} nulls:{j:q,...}` (RootVector::str form).
RootVector parse_root_line(std::string_view line);

/// Window files: a `spec ...` header line followed by one root per line.
std::string print_window(const LearsWindow& window);
LearsWindow parse_window(std::string_view text);

/// Machine-readable report document, schema version 1: fields
/// schema_version, ok, items[{axiom,status,witnesses,unchecked_count,
/// checked_count}], meta{...}.
std::string report_structured(const Report& report);

}  // namespace rf::textio
