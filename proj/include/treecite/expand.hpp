#pragma once

#include "treecite/ctx.hpp"
#include "treecite/render.hpp"
#include "treecite/segment.hpp"

namespace treecite {

// Structure-aware expansion of a seed selection toward the budget. Growth is
// staged: complete partial sentences, then the enclosing block leaves, then
// whole sentences in document order alternating after/before the seed span.
// Each stage is kept only while the fully contextualized rendering,
// render(subdoc(doc, ctx_html(P))), stays within budget.limit; growth stops
// at the first stage that would exceed it. Expansion never crosses a header
// that outranks every header active for the seed. When the seed alone
// already exceeds the budget it is returned unchanged.
PathSet expand_local(const AnnotatedDoc& annotated, const PathSet& seed,
                     const Budget& budget, const CtxPolicies& policies = {});

}  // namespace treecite
