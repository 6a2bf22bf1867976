#include "causal_loom/evaluate.hpp"
#include "causal_loom/graph_document.hpp"
#include "causal_loom/sem_format.hpp"
#include "causal_loom/service.hpp"

#include "CLI11.hpp"
#include "httplib.h"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace causal_loom;

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kOverConstrained = 2;

void configure_logging() {
    auto logger = spdlog::stderr_color_mt("causal-loom");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::info);
    if (const char* level = std::getenv("CAUSAL_LOOM_LOG")) {
        auto parsed = spdlog::level::from_str(level);
        if (parsed == spdlog::level::off && std::string_view(level) != "off")
            spdlog::warn("unrecognised CAUSAL_LOOM_LOG level '{}'", level);
        else
            spdlog::set_level(parsed);
    }
}

std::optional<StructuralSystem> load_model(const std::string& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        std::cerr << file << ": error: cannot open file\n";
        return std::nullopt;
    }
    std::ostringstream text;
    text << in.rdbuf();
    try {
        return parse_model(text.str());
    } catch (const ParseError& e) {
        std::cerr << file << ":" << e.line() << ":" << e.column() << ": error: " << e.message() << "\n";
    } catch (const Error& e) {
        std::cerr << file << ": error: " << e.what() << "\n";
    }
    return std::nullopt;
}

int report_over_constraint(const OverConstraintWitness& witness, const std::string& format) {
    if (format == "json") {
        std::cout << witness_json(witness).dump(2) << "\n";
    } else {
        std::cout << OverConstrainedError(witness).what() << "\n";
    }
    return kOverConstrained;
}

int run_order(const std::string& file, const std::string& format) {
    auto system = load_model(file);
    if (!system) return kFailure;
    if (auto witness = over_constraint_witness(*system)) return report_over_constraint(*witness, format);

    auto ordering = causal_ordering(*system);
    if (format == "json")
        std::cout << graph_document(*system, ordering).dump(2) << "\n";
    else
        std::cout << graph_dot(*system, ordering);
    return kOk;
}

int run_eval(const std::string& file) {
    auto system = load_model(file);
    if (!system) return kFailure;
    if (auto witness = over_constraint_witness(*system)) return report_over_constraint(*witness, "text");

    ValueTable values;
    try {
        values = evaluate_forward(*system, causal_ordering(*system));
    } catch (const EvaluationError& e) {
        std::cerr << file << ": error: " << e.what() << "\n";
        return kFailure;
    }
    for (const auto& [var, attrs] : system->variables()) {
        auto it = values.find(var);
        if (it == values.end()) {
            std::cout << var.str() << " structural-only\n";
        } else {
            char buffer[64];
            std::snprintf(buffer, sizeof buffer, "%.6g", it->second);
            std::cout << var.str() << " " << buffer << "\n";
        }
    }
    return kOk;
}

int run_serve(const std::string& kb_file, const std::string& bind) {
    auto colon = bind.rfind(':');
    if (colon == std::string::npos) {
        std::cerr << "error: --bind expects host:port\n";
        return kFailure;
    }
    auto host = bind.substr(0, colon);
    int port = 0;
    try {
        std::size_t used = 0;
        port = std::stoi(bind.substr(colon + 1), &used);
        if (used != bind.size() - colon - 1 || port < 0 || port > 65535) throw std::out_of_range("port");
    } catch (const std::exception&) {
        std::cerr << "error: invalid port in '" << bind << "'\n";
        return kFailure;
    }

    KnowledgeBase kb;
    try {
        kb = kb_load_file(kb_file);
    } catch (const Error& e) {
        std::cerr << kb_file << ": error: " << e.what() << "\n";
        return kFailure;
    }

    Service service(std::move(kb), kb_file);
    httplib::Server server;
    service.install(server);
    if (port == 0) {
        port = server.bind_to_any_port(host);
        if (port < 0) {
            std::cerr << "error: cannot bind " << host << "\n";
            return kFailure;
        }
    } else if (!server.bind_to_port(host, port)) {
        std::cerr << "error: cannot bind " << bind << "\n";
        return kFailure;
    }
    spdlog::info("listening on {}:{}", host, port);
    server.listen_after_bind();
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    configure_logging();

    CLI::App app{"Causal ordering of structural equation models"};
    app.require_subcommand(1);

    std::string file;
    std::string format = "dot";
    auto* order = app.add_subcommand("order", "Print the causal graph of a .sem model");
    order->add_option("file", file, ".sem model")->required();
    order->add_option("--format", format, "Output format")->check(CLI::IsMember({"dot", "json"}));

    auto* eval = app.add_subcommand("eval", "Evaluate a .sem model forward");
    eval->add_option("file", file, ".sem model")->required();

    std::string kb_file;
    std::string bind = "127.0.0.1:8080";
    auto* serve = app.add_subcommand("serve", "Run the HTTP/JSON service");
    serve->add_option("--kb", kb_file, "Knowledge-base JSON file")->required();
    serve->add_option("--bind", bind, "host:port to listen on");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kFailure;
    }

    if (*order) return run_order(file, format);
    if (*eval) return run_eval(file);
    return run_serve(kb_file, bind);
}
