#include "rtb/jsonio.hpp"

#include <fstream>

namespace rtb {

namespace {

constexpr int kDigits = 25;

nlohmann::json enclosure(const Iv& v) {
  return nlohmann::json::array({v.lo_str(kDigits), v.hi_str(kDigits)});
}

Iv read_enclosure(const nlohmann::json& j, mpfr_prec_t prec) {
  if (!j.is_array() || j.size() != 2)
    throw std::runtime_error("beam JSON: enclosure must be [lo, hi]");
  Iv lo = Iv::from_decimal(j[0].get<std::string>(), prec);
  Iv hi = Iv::from_decimal(j[1].get<std::string>(), prec);
  Iv r = Iv::hull(lo, hi);
  if (certainly_less(hi, lo))
    throw std::runtime_error("beam JSON: enclosure with lo > hi");
  return r;
}

const char* term_name(Beam::Term t) {
  switch (t) {
    case Beam::Term::Return0: return "return0";
    case Beam::Term::LevelEdge: return "level-edge";
    case Beam::Term::Diagonal: return "diagonal";
    case Beam::Term::Budget: return "budget";
  }
  return "?";
}

Beam::Term term_from(const std::string& s) {
  if (s == "return0") return Beam::Term::Return0;
  if (s == "level-edge") return Beam::Term::LevelEdge;
  if (s == "diagonal") return Beam::Term::Diagonal;
  if (s == "budget") return Beam::Term::Budget;
  throw std::runtime_error("beam JSON: unknown terminal '" + s + "'");
}

const char* side_name(Side s) {
  switch (s) {
    case Side::S0Pos: return "S0+";
    case Side::S0Neg: return "S0-";
    case Side::STop: return "top";
    case Side::SBot: return "bottom";
  }
  return "?";
}

Side side_from(const std::string& s) {
  if (s == "S0+") return Side::S0Pos;
  if (s == "S0-") return Side::S0Neg;
  if (s == "top") return Side::STop;
  if (s == "bottom") return Side::SBot;
  throw std::runtime_error("beam JSON: unknown side '" + s + "'");
}

}  // namespace

nlohmann::json beams_to_json(const TriangleConfig& cfg, const BeamSet& bs) {
  nlohmann::json j;
  j["alpha_spec"] = cfg.alpha.canonical();
  j["precision"] = static_cast<long>(bs.certified_prec);
  j["band"] = {bs.M, bs.N};
  j["version"] = kBeamSchemaVersion;
  nlohmann::json beams = nlohmann::json::array();
  for (size_t i = 0; i < bs.beams.size(); ++i) {
    const Beam& b = bs.beams[i];
    nlohmann::json e;
    e["I"] = enclosure(Iv::hull(b.lo.enc(), b.hi.enc()));
    e["J"] = enclosure(Iv::hull(b.jlo.enc(), b.jhi.enc()));
    e["code"] = b.code.str();
    e["p"] = b.p();
    e["term"] = term_name(b.term);
    e["arrival_level"] = b.arrival_level;
    e["side"] = side_name(bs.beam_side[i]);
    e["flags"] = {{"palindromic", b.palindromic},
                  {"contains_center", b.contains_center},
                  {"exceptional_up", b.exceptional_up},
                  {"exceptional_down", b.exceptional_down},
                  {"degenerate", b.degenerate},
                  {"j_reversed", b.j_reversed}};
    beams.push_back(std::move(e));
  }
  j["beams"] = std::move(beams);
  nlohmann::json splits = nlohmann::json::array();
  for (const SplitPoint& s : bs.splits) {
    splits.push_back({{"x", enclosure(s.x.enc())},
                      {"step", s.step},
                      {"level", s.level},
                      {"vertex", s.vertex}});
  }
  j["splits"] = std::move(splits);
  return j;
}

void export_beams_json(const TriangleConfig& cfg, const BeamSet& bs,
                       const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << beams_to_json(cfg, bs).dump(2) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

BeamSet import_beams_json(const nlohmann::json& j, mpfr_prec_t prec) {
  if (!j.contains("version") || j["version"].get<int>() != kBeamSchemaVersion)
    throw std::runtime_error("beam JSON: missing or unsupported version");
  BeamSet bs;
  bs.M = j.at("band").at(0).get<int>();
  bs.N = j.at("band").at(1).get<int>();
  bs.certified_prec = j.at("precision").get<long>();
  for (const auto& e : j.at("beams")) {
    Beam b;
    read_enclosure(e.at("I"), prec);  // validates lo <= hi
    read_enclosure(e.at("J"), prec);
    b.lo = XReal(Iv::from_decimal(e.at("I").at(0).get<std::string>(), prec));
    b.hi = XReal(Iv::from_decimal(e.at("I").at(1).get<std::string>(), prec));
    b.jlo = XReal(Iv::from_decimal(e.at("J").at(0).get<std::string>(), prec));
    b.jhi = XReal(Iv::from_decimal(e.at("J").at(1).get<std::string>(), prec));
    b.code = Code::parse(e.at("code").get<std::string>());
    if (b.p() != e.at("p").get<int>())
      throw std::runtime_error("beam JSON: stored p disagrees with code");
    b.term = term_from(e.at("term").get<std::string>());
    b.arrival_level = e.at("arrival_level").get<int>();
    const auto& f = e.at("flags");
    b.palindromic = f.at("palindromic").get<bool>();
    b.contains_center = f.at("contains_center").get<bool>();
    b.exceptional_up = f.at("exceptional_up").get<bool>();
    b.exceptional_down = f.at("exceptional_down").get<bool>();
    b.degenerate = f.at("degenerate").get<bool>();
    b.j_reversed = f.at("j_reversed").get<bool>();
    bs.beams.push_back(std::move(b));
    bs.beam_side.push_back(side_from(e.at("side").get<std::string>()));
  }
  for (const auto& s : j.at("splits")) {
    SplitPoint sp;
    sp.x = XReal(read_enclosure(s.at("x"), prec));
    sp.step = s.at("step").get<int>();
    sp.level = s.at("level").get<int>();
    sp.vertex = s.at("vertex").get<int>();
    bs.splits.push_back(std::move(sp));
  }
  return bs;
}

}  // namespace rtb
