#include <chrono>
#include <cstdint>
#include <exception>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "sessia/demos/demos.hpp"

namespace {

struct Options {
    std::string example;
    std::uint64_t start = 0;
    std::size_t take = 5;
    std::uint64_t delay_ms = 0;
    std::size_t clients = 2;
    sessia::demos::Link link = sessia::demos::Link::Apply;
};

int run(const Options& o) {
    using namespace sessia::demos;
    if (o.example == "hello") {
        run_hello(std::cout, "Alice", o.link);
        return 0;
    }
    Transcript t;
    if (o.example == "counter")
        run_counter(t, o.start, o.take, std::chrono::milliseconds(o.delay_ms), o.link);
    else if (o.example == "shared-counter")
        run_shared_counter(t, o.clients);
    else if (o.example == "canvas")
        run_canvas(t, o.link);
    t.write(std::cout);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Run the sessia demo programs"};
    app.require_subcommand(1);

    Options o;
    auto* run_cmd = app.add_subcommand("run", "Run one example and print its transcript");
    run_cmd->add_option("example", o.example, "hello | counter | shared-counter | canvas")
        ->required()
        ->check(CLI::IsMember({"hello", "counter", "shared-counter", "canvas"}));
    run_cmd->add_option("--start", o.start, "First counter value");
    run_cmd->add_option("--take", o.take, "Number of counter values to receive");
    run_cmd->add_option("--delay-ms", o.delay_ms, "Producer delay per value");
    run_cmd->add_option("--clients", o.clients, "Number of shared-counter clients")->check(CLI::PositiveNumber);
    std::map<std::string, sessia::demos::Link> links{{"apply", sessia::demos::Link::Apply},
                                                     {"cut", sessia::demos::Link::Cut}};
    run_cmd->add_option("--link", o.link, "Connect clients with apply_channel or its cut form")
        ->transform(CLI::CheckedTransformer(links, CLI::ignore_case));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        std::cerr << app.help();
        return 2;
    }

    try {
        return run(o);
    } catch (const std::exception& e) {
        std::cerr << "sessia-demos: " << e.what() << '\n';
        return 1;
    } catch (...) {
        std::cerr << "sessia-demos: unknown failure\n";
        return 1;
    }
}
