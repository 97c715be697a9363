/* Compile-only check that perclab.h is consumable from C11. */
#include "perclab.h"

const char* (*version_fn)(void) = perclab_version;
