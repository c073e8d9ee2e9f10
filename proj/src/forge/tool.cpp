#include "cobbie/forge/tool.hpp"

namespace cobbie::forge {

double deletion_score(const ToolRecord& t) {
    return (1.0 - t.r_call()) / 2.0 + (1.0 - t.r_succ()) / 2.0;
}

}  // namespace cobbie::forge
