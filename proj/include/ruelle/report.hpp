#ifndef RUELLE_REPORT_HPP
#define RUELLE_REPORT_HPP

#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"

#include "ruelle/attractor.hpp"
#include "ruelle/conditions.hpp"
#include "ruelle/config.hpp"
#include "ruelle/dual.hpp"
#include "ruelle/modulus.hpp"
#include "ruelle/transfer_operator.hpp"

namespace ruelle {

/** Key order is preserved so that reports are byte-for-byte reproducible. */
using Document = nlohmann::ordered_json;

Document to_document(const AttractorMesh &mesh, bool include_points = true);
Document to_document(const OrbitCoverage &coverage);
Document to_document(const ModulusTable &table);
Document to_document(const DiniReport &report);
Document to_document(const SpectralEstimate &estimate);
Document to_document(const SandwichReport &report);
Document to_document(const ConditionReport &report);
Document to_document(const GridFunction &f);
Document to_document(const EigenPair &pair);
Document to_document(const EigenMeasure &measure);

/**
 * Long-format CSV, header `section,quantity,index,value`: one row per leaf of
 * the document. `section` is the top-level key, `quantity` the dotted path of
 * nested keys below it, `index` the slash-joined array positions (empty for
 * scalars). Numbers use the shortest round-trip decimal form.
 */
std::string render_tabular(const Document &doc);

std::string render(const Document &doc, OutputFormat format);

/** Shortest decimal string that parses back to exactly `x`. */
std::string format_double(double x);

/** Writes `<dir>/<command>.<ext>` through a temporary file and a rename. Returns the final path. */
std::filesystem::path write_report(const Document &doc, const std::filesystem::path &dir, std::string_view command,
                                   OutputFormat format);

} // namespace ruelle

#endif // RUELLE_REPORT_HPP
