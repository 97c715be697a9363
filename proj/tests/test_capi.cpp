#include "perclab.h"
int main() { return 0; }
