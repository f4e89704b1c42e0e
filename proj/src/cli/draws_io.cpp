#include "sjsdm/cli/draws_io.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>

#include "sjsdm/cli/config.hpp"
#include "sjsdm/error.hpp"

namespace sjsdm::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kFormat = "sjsdm-draws";
constexpr int kVersion = 1;

std::uint64_t to_le(std::uint64_t v) {
    if constexpr (std::endian::native == std::endian::little) return v;
    std::uint64_t out = 0;
    for (int i = 0; i < 8; ++i) out |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
    return out;
}

class BlockWriter {
public:
    BlockWriter(const fs::path& path) : path_(path), out_(path, std::ios::binary) {
        if (!out_) throw IoError("cannot write '" + path.string() + "'");
    }
    void put(const double* v, std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) {
            std::uint64_t bits;
            std::memcpy(&bits, v + i, 8);
            bits = to_le(bits);
            out_.write(reinterpret_cast<const char*>(&bits), 8);
        }
    }
    void put(double v) { put(&v, 1); }
    void put(const Matrix& m) { put(m.data(), static_cast<std::size_t>(m.size())); }
    void put(const Vector& v) { put(v.data(), static_cast<std::size_t>(v.size())); }
    void close() {
        out_.close();
        if (!out_) throw IoError("failed writing '" + path_.string() + "'");
    }

private:
    fs::path path_;
    std::ofstream out_;
};

std::vector<double> read_block(const fs::path& path, std::size_t expected) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("missing draws file '" + path.string() + "'");
    std::vector<double> out(expected);
    for (std::size_t i = 0; i < expected; ++i) {
        std::uint64_t bits;
        if (!in.read(reinterpret_cast<char*>(&bits), 8))
            throw IoError("draws file '" + path.string() + "' is truncated");
        bits = to_le(bits);
        std::memcpy(&out[i], &bits, 8);
    }
    if (in.peek() != std::char_traits<char>::eof())
        throw IoError("draws file '" + path.string() + "' has trailing bytes");
    return out;
}

}  // namespace

fs::path chain_dir(const fs::path& root, int chain) {
    return root / ("chain_" + std::to_string(chain));
}

void write_draws(const fs::path& dir, const PosteriorDraws& draws) {
    fs::create_directories(dir);
    Index S = 0, p = 0, N = 0, r = 0, n = 0;
    if (!draws.empty()) {
        const ModelState& s0 = draws.states.front();
        S = s0.B.rows();
        p = s0.B.cols();
        N = s0.Z.rows();
        r = s0.Z.cols();
        n = s0.W.rows();
    }
    struct Spec {
        const char* name;
        std::vector<Index> shape;
    };
    const std::vector<Spec> specs = {{"B", {S, p}},   {"Z", {N, r}},      {"k", {S}},
                                     {"p", {N}},      {"W", {n, r}},      {"sigma2", {}},
                                     {"phi", {}},     {"DZ", {r, r}},     {"eta", {r}}};
    BlockWriter wB(dir / "B.f64"), wZ(dir / "Z.f64"), wk(dir / "k.f64"), wp(dir / "p.f64"),
        wW(dir / "W.f64"), ws(dir / "sigma2.f64"), wphi(dir / "phi.f64"), wD(dir / "DZ.f64"),
        weta(dir / "eta.f64");
    for (const ModelState& st : draws.states) {
        if (st.B.rows() != S || st.Z.rows() != N || st.W.rows() != n)
            throw DimensionMismatch("draws have inconsistent shapes");
        wB.put(st.B);
        wZ.put(st.Z);
        for (int label : st.k) wk.put(static_cast<double>(label));
        wp.put(st.p);
        wW.put(st.W);
        ws.put(st.sigma2);
        wphi.put(st.phi);
        wD.put(st.DZ);
        weta.put(st.eta);
    }
    for (BlockWriter* w : {&wB, &wZ, &wk, &wp, &wW, &ws, &wphi, &wD, &weta}) w->close();
    if (!draws.log_joint.empty()) {
        BlockWriter wl(dir / "log_joint.f64");
        wl.put(draws.log_joint.data(), draws.log_joint.size());
        wl.close();
    }

    Json manifest;
    manifest["format"] = kFormat;
    manifest["version"] = kVersion;
    manifest["byte_order"] = "little";
    manifest["dtype"] = "float64";
    manifest["layout"] = "draw-major; column-major within a draw";
    manifest["n_draws"] = draws.size();
    Json blocks = Json::object();
    for (const Spec& s : specs) blocks[s.name] = {{"file", std::string(s.name) + ".f64"}, {"shape", s.shape}};
    if (!draws.log_joint.empty()) blocks["log_joint"] = {{"file", "log_joint.f64"}, {"shape", Json::array()}};
    manifest["blocks"] = blocks;
    manifest["factors"] = to_string(draws.factors);
    manifest["kind"] = to_string(draws.kind);
    manifest["mh_acceptance"] = draws.mh_acceptance;
    manifest["final_mh_step"] = draws.final_mh_step;
    manifest["train_site_ids"] = draws.train_site_ids;
    manifest["species_ids"] = draws.species_ids;
    write_json(dir / "manifest.json", manifest);
}

PosteriorDraws read_draws(const fs::path& dir) {
    const fs::path mpath = dir / "manifest.json";
    if (!fs::exists(mpath)) throw IoError("missing draws manifest '" + mpath.string() + "'");
    const Json m = read_json(mpath);
    if (m.value("format", "") != kFormat || m.value("version", 0) != kVersion)
        throw IoError("'" + mpath.string() + "' is not a supported draws manifest");
    PosteriorDraws out;
    out.factors = parse_factor_model(m.at("factors").get<std::string>());
    out.kind = parse_response_kind(m.at("kind").get<std::string>());
    out.mh_acceptance = m.at("mh_acceptance").get<double>();
    out.final_mh_step = m.at("final_mh_step").get<double>();
    out.train_site_ids = m.at("train_site_ids").get<std::vector<std::string>>();
    out.species_ids = m.at("species_ids").get<std::vector<std::string>>();
    const auto T = m.at("n_draws").get<std::size_t>();
    const Json& blocks = m.at("blocks");
    auto shape = [&](const char* name) { return blocks.at(name).at("shape").get<std::vector<Index>>(); };
    auto load = [&](const char* name, std::size_t per_draw) {
        return read_block(dir / blocks.at(name).at("file").get<std::string>(), per_draw * T);
    };
    const auto sB = shape("B"), sZ = shape("Z"), sW = shape("W");
    const Index S = sB[0], p = sB[1], N = sZ[0], r = sZ[1], n = sW[0];
    const auto uz = [](Index v) { return static_cast<std::size_t>(v); };
    const auto B = load("B", uz(S * p)), Z = load("Z", uz(N * r)), k = load("k", uz(S)),
               pv = load("p", uz(N)), W = load("W", uz(n * r)), s2 = load("sigma2", 1),
               phi = load("phi", 1), DZ = load("DZ", uz(r * r)), eta = load("eta", uz(r));
    out.states.resize(T);
    for (std::size_t t = 0; t < T; ++t) {
        ModelState& st = out.states[t];
        st.B = Eigen::Map<const Matrix>(B.data() + t * uz(S * p), S, p);
        st.Z = Eigen::Map<const Matrix>(Z.data() + t * uz(N * r), N, r);
        st.k.resize(uz(S));
        for (std::size_t l = 0; l < uz(S); ++l) st.k[l] = static_cast<int>(k[t * uz(S) + l]);
        st.p = Eigen::Map<const Vector>(pv.data() + t * uz(N), N);
        st.W = Eigen::Map<const Matrix>(W.data() + t * uz(n * r), n, r);
        st.sigma2 = s2[t];
        st.phi = phi[t];
        st.DZ = Eigen::Map<const Matrix>(DZ.data() + t * uz(r * r), r, r);
        st.eta = Eigen::Map<const Vector>(eta.data() + t * uz(r), r);
    }
    if (blocks.contains("log_joint")) out.log_joint = load("log_joint", 1);
    return out;
}

PosteriorDraws read_all_chains(const fs::path& root) {
    if (!fs::is_directory(root)) throw IoError("no draws directory at '" + root.string() + "'");
    std::vector<int> chains;
    for (const auto& entry : fs::directory_iterator(root)) {
        const std::string name = entry.path().filename().string();
        if (entry.is_directory() && name.rfind("chain_", 0) == 0) chains.push_back(std::stoi(name.substr(6)));
    }
    if (chains.empty()) throw IoError("no chain directories below '" + root.string() + "'");
    std::sort(chains.begin(), chains.end());
    PosteriorDraws pooled = read_draws(chain_dir(root, chains.front()));
    for (std::size_t c = 1; c < chains.size(); ++c) pooled.append(read_draws(chain_dir(root, chains[c])));
    return pooled;
}

}  // namespace sjsdm::cli
