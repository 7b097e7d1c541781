#include "synlens/corpus.hpp"

#include <algorithm>

namespace synlens {

std::string_view to_string(SourceKind kind) {
    return kind == SourceKind::Csv ? "csv" : "conllu";
}

bool dependencies_complete(const std::vector<TokenAnnotation>& tokens) {
    if (tokens.empty()) return false;
    std::size_t roots = 0;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const auto& tok = tokens[i];
        if (!tok.deprel) return false;
        if (tok.root) {
            if (tok.head) return false;
            ++roots;
        } else if (!tok.head || *tok.head >= tokens.size() || *tok.head == i) {
            return false;
        }
    }
    return roots == 1;
}

std::string format_diagnostic(const Diagnostic& diag, std::string_view unit) {
    std::string out = diag.severity == Diagnostic::Severity::Rejected ? "rejected " : "warning: ";
    out += unit;
    out += ' ';
    out += std::to_string(diag.location);
    out += ": ";
    out += diag.message;
    return out;
}

bool is_upos(std::string_view tag) {
    return std::find(std::begin(kUposTags), std::end(kUposTags), tag) != std::end(kUposTags);
}

}  // namespace synlens
