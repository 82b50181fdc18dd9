#include "sgp/errors.hpp"

namespace sgp {

const char* stage_name(Stage stage) {
  switch (stage) {
    case Stage::Input: return "input";
    case Stage::Structure: return "structure";
    case Stage::Template: return "template";
    case Stage::Plu: return "plu";
    case Stage::Qz: return "qz";
    case Stage::Filter: return "filter";
    case Stage::Unknown: break;
  }
  return "unknown";
}

}  // namespace sgp
