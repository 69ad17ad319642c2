// Sentence simplification: split coordinated clauses and pull out relative
// clauses so that simple declaratives reach the pattern matcher.

#ifndef QGEN_SIMPLIFY_HPP
#define QGEN_SIMPLIFY_HPP

#include <vector>

#include "qgen/annotate.hpp"

namespace qgen {

/// Element 0 is always `sentence` itself. Further elements are the extracted
/// relative-clause statements, the host sentence without them, and the
/// coordinate clauses of the (reduced) host. Labels are sliced, never re-tagged.
std::vector<AnnotatedSentence> simplify_sentence(const AnnotatedSentence& sentence);

}  // namespace qgen

#endif
