// The executor of a program cannot be reached from user code.
#include "sessia/sessia.hpp"

using namespace sessia;

int main() {
    Session<End> done = terminate();
    auto& exec = done.executor_;
    (void)exec;
}
