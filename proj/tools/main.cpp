#include "rs/phi4.hpp"

#include <cstdio>

#ifndef RS_VERSION_STRING
#define RS_VERSION_STRING "v0.0.0"
#endif

int main() {
    std::puts(RS_VERSION_STRING);
    return 0;
}
