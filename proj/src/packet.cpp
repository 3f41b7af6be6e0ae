#include <psched/packet.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace psched {

void Instance::validate() const {
    if (horizon < 0) throw std::invalid_argument("instance: horizon must be >= 0");
    PacketId expected_id = 0;
    Step prev_release = 1;
    for (const Packet& p : packets) {
        if (p.id != expected_id)
            throw std::invalid_argument("instance: ids must be 0..n-1 in (release, id) order");
        if (p.release < 1 || p.release > horizon)
            throw std::invalid_argument("instance: release outside [1, horizon]");
        if (p.deadline < p.release)
            throw std::invalid_argument("instance: deadline before release");
        if (!(p.weight > 0.0))
            throw std::invalid_argument("instance: weight must be positive");
        if (p.release < prev_release)
            throw std::invalid_argument("instance: packets not sorted by release");
        prev_release = p.release;
        ++expected_id;
    }
}

Step Instance::max_deadline() const {
    Step d = 0;
    for (const Packet& p : packets) d = std::max(d, p.deadline);
    return d;
}

Instance load_instance(std::istream& in) {
    Instance inst;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!have_header) {
            if (line.rfind("H=", 0) != 0)
                throw std::invalid_argument("instance file: first line must be H=<horizon>");
            inst.horizon = std::stoll(line.substr(2));
            have_header = true;
            continue;
        }
        std::istringstream fields(line);
        Packet p;
        if (!(fields >> p.id >> p.release >> p.deadline >> p.weight))
            throw std::invalid_argument("instance file: expected `id r d w`, got: " + line);
        inst.packets.push_back(p);
    }
    if (!have_header) throw std::invalid_argument("instance file: missing H=<horizon> header");
    inst.validate();
    return inst;
}

Instance load_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open instance file: " + path);
    return load_instance(in);
}

void save_instance(const Instance& inst, std::ostream& out) {
    out << "H=" << inst.horizon << '\n';
    char buf[64];
    for (const Packet& p : inst.packets) {
        std::snprintf(buf, sizeof(buf), "%.17g", p.weight);
        out << p.id << ' ' << p.release << ' ' << p.deadline << ' ' << buf << '\n';
    }
}

void save_instance_file(const Instance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write instance file: " + path);
    save_instance(inst, out);
}

}  // namespace psched
