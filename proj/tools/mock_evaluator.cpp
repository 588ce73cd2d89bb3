// Line-protocol responder used by the external-evaluator tests: reads one
// JSON request per line ({"id", "genome", "arch"}) and answers
// {"id", "error"}. Flags select misbehaviors for the failure-path tests.
#include <chrono>
#include <cstdint>
#include <iostream>
#include <string>
#include <thread>

#include <json.hpp>

namespace {

std::uint64_t fnv1a64(const std::string& bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

} // namespace

int main(int argc, char** argv)
{
    double fixed_error = -1.0;
    bool silent = false;
    bool garbage = false;
    bool wrong_id = false;
    int exit_code = -1;
    int fail_after = -1;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--error" && i + 1 < argc) fixed_error = std::stod(argv[++i]);
        else if (arg == "--silent") silent = true;
        else if (arg == "--garbage") garbage = true;
        else if (arg == "--wrong-id") wrong_id = true;
        else if (arg == "--exit" && i + 1 < argc) exit_code = std::stoi(argv[++i]);
        else if (arg == "--fail-after" && i + 1 < argc) fail_after = std::stoi(argv[++i]);
        else {
            std::cerr << "mock-evaluator: unknown flag " << arg << "\n";
            return 1;
        }
    }
    if (exit_code >= 0) return exit_code;

    int answered = 0;
    std::string line;
    while (std::getline(std::cin, line)) {
        if (line.empty()) continue;
        if (silent) {
            std::this_thread::sleep_for(std::chrono::seconds(3600));
            continue;
        }
        if (fail_after >= 0 && answered >= fail_after) return 1;
        const auto request = nlohmann::json::parse(line, nullptr, false);
        if (request.is_discarded() || !request.contains("id") || !request.contains("genome")) {
            std::cerr << "mock-evaluator: bad request\n";
            return 1;
        }
        if (garbage) {
            std::cout << "this is not json\n" << std::flush;
            ++answered;
            continue;
        }
        const std::uint64_t id = request["id"].get<std::uint64_t>() + (wrong_id ? 1 : 0);
        double error = fixed_error;
        if (error < 0.0) {
            // deterministic pseudo-error derived from the genome text
            const double unit =
                static_cast<double>(fnv1a64(request["genome"].get<std::string>()) >> 11) *
                0x1.0p-53;
            error = 0.05 + 0.55 * unit;
        }
        nlohmann::json response = {{"id", id}, {"error", error}};
        std::cout << response.dump() << "\n" << std::flush;
        ++answered;
    }
    return 0;
}
