#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include "sessia/demos/transcript.hpp"

namespace sessia::demos {

// Ask for a key; the provider either answers with a name or says nothing.
using Lookup = ReceiveValue<std::uint64_t, InternalChoice<SendValue<std::string, End>, End>>;
using LookupClient = ReceiveChannel<Lookup, End>;

using Directory = std::map<std::uint64_t, std::string>;

inline Session<Lookup> lookup_provider(Directory dir) {
    return receive_value([dir = std::move(dir)](std::uint64_t key) -> Session<InternalChoice<SendValue<std::string, End>, End>> {
        auto it = dir.find(key);
        if (it == dir.end()) return offer_right(terminate());
        return offer_left(send_value(it->second, terminate()));
    });
}

inline Session<LookupClient> lookup_client(std::uint64_t key, Transcript* t) {
    return receive_channel([key, t](auto dir) {
        return send_value_to(dir, key, case_of(dir, [t, dir](auto branch) {
                                 return branch.match(
                                     [t, dir](auto inject) {
                                         return inject(receive_value_from(dir, [t, dir](std::string name) {
                                             t->record(EventKind::Recv, name);
                                             return wait(dir, terminate());
                                         }));
                                     },
                                     [t, dir](auto inject) {
                                         t->record(EventKind::End, "not found");
                                         return inject(wait(dir, terminate()));
                                     });
                             }));
    });
}

inline void run_lookup(Transcript& t, Directory dir, std::uint64_t key, Link how = Link::Apply) {
    run_session(link(how, lookup_client(key, &t), lookup_provider(std::move(dir))));
    runtime::wait_idle();
}

} // namespace sessia::demos
