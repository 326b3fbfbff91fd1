// A provider still waiting for a value is not a complete program.
#include <string>

#include "sessia/sessia.hpp"

using namespace sessia;

int main() {
    Session<ReceiveValue<std::string, End>> provider = receive_value([](std::string) { return terminate(); });
    run_session(std::move(provider));
}
