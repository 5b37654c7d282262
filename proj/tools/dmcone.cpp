#include "dmcone/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    const bool as_json = std::find(args.begin(), args.end(), "--json") != args.end();
    const auto result = dmcone::cli::run(args);
    auto& stream = result.status == "error" ? std::cerr : std::cout;
    if (as_json)
        stream << result.to_json().dump(2) << std::endl;
    else
        stream << dmcone::cli::render_text(result);
    return result.exit_code();
}
