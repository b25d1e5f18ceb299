#include "fractop/svg.hpp"

#include <cstdio>
#include <sstream>

namespace fractop {

namespace {

std::string num(const Rational& v) {
  if (v.get_den() == 1) return v.get_num().get_str();
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v.get_d());
  std::string s = buf;
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return s;
}

}  // namespace

std::string render_svg(const CellSet& cells, const std::optional<Polyline>& arc, const Rational& scale) {
  const Box& amb = cells.ifs()->ambient();
  const bool planar = cells.dim() == 2;
  const Rational width = (amb.upper()[0] - amb.lower()[0]) * scale;
  const Rational height = planar ? Rational((amb.upper()[1] - amb.lower()[1]) * scale) : Rational(scale / 9);
  auto sx = [&](const Rational& x) { return Rational((x - amb.lower()[0]) * scale); };
  auto sy = [&](const Rational& y) { return Rational((amb.upper()[1] - y) * scale); };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(width) << "\" height=\""
     << num(height) << "\" viewBox=\"0 0 " << num(width) << ' ' << num(height) << "\">\n";
  os << "<title>" << cells.ifs()->name() << " level " << cells.level() << "</title>\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << num(width) << "\" height=\"" << num(height) << "\" fill=\"white\"/>\n";
  os << "<g fill=\"black\" stroke=\"none\">\n";
  for (const auto& c : cells.cells()) {
    const auto& lo = c.box.lower();
    const auto& hi = c.box.upper();
    if (planar) {
      os << "<rect x=\"" << num(sx(lo[0])) << "\" y=\"" << num(sy(hi[1])) << "\" width=\""
         << num(Rational((hi[0] - lo[0]) * scale)) << "\" height=\"" << num(Rational((hi[1] - lo[1]) * scale))
         << "\"/>\n";
    } else {
      os << "<rect x=\"" << num(sx(lo[0])) << "\" y=\"0\" width=\"" << num(Rational((hi[0] - lo[0]) * scale))
         << "\" height=\"" << num(height) << "\"/>\n";
    }
  }
  os << "</g>\n";
  if (arc && !arc->empty()) {
    auto px = [&](const Point& p) { return num(sx(p[0])); };
    auto py = [&](const Point& p) { return planar ? num(sy(p[1])) : num(Rational(height / 2)); };
    os << "<polyline fill=\"none\" stroke=\"red\" stroke-width=\"3\" points=\"";
    for (std::size_t i = 0; i < arc->size(); ++i) {
      if (i) os << ' ';
      os << px((*arc)[i]) << ',' << py((*arc)[i]);
    }
    os << "\"/>\n";
    const Point& p = arc->front();
    const Point& q = arc->back();
    os << "<circle cx=\"" << px(p) << "\" cy=\"" << py(p) << "\" r=\"6\" fill=\"red\"/>\n";
    os << "<circle cx=\"" << px(q) << "\" cy=\"" << py(q) << "\" r=\"6\" fill=\"red\"/>\n";
    os << "<text x=\"" << px(p) << "\" y=\"" << py(p) << "\" dx=\"8\" dy=\"-8\" fill=\"red\" font-size=\"24\">p</text>\n";
    os << "<text x=\"" << px(q) << "\" y=\"" << py(q) << "\" dx=\"8\" dy=\"-8\" fill=\"red\" font-size=\"24\">q</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace fractop
