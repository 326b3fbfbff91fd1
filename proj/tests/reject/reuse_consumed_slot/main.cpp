// The provider's channel is used again after wait has emptied its slot.
#include "sessia/sessia.hpp"

using namespace sessia;

Session<ReceiveChannel<End, End>> client = receive_channel([](auto a) {
    return wait(a, wait(a, terminate()));
});

int main() {}
