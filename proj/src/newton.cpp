#include "nwc/newton.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>

#include "nwc/errors.hpp"
#include "nwc/fourier_motzkin.hpp"

namespace nwc {

namespace {

RatVec to_rat_vec(const ExponentVec& v) {
    RatVec out;
    out.reserve(v.size());
    for (int e : v) out.push_back(Rat(e));
    return out;
}

// Rank of the difference set {points[i] - points[0]}: the affine dimension
// of the point set.
int affine_rank(const std::vector<ExponentVec>& points) {
    if (points.size() <= 1) return 0;
    RatMat diffs;
    for (std::size_t i = 1; i < points.size(); ++i) {
        RatVec row;
        row.reserve(points[0].size());
        for (std::size_t j = 0; j < points[0].size(); ++j)
            row.push_back(Rat(points[i][j] - points[0][j]));
        diffs.push_back(std::move(row));
    }
    return rank_of(std::move(diffs));
}

// Enumerates all size-k subsets of [0, m) whose points are affinely
// independent, invoking fn on each.  Extensions that do not raise the
// affine rank are pruned.  Guarded against combinatorial blow-up.
template <typename Fn>
void for_each_affinely_independent_subset(const std::vector<ExponentVec>& pts, int k, Fn&& fn) {
    std::size_t examined = 0;
    std::vector<int> chosen;
    auto recurse = [&](auto&& self, int next) -> void {
        if (static_cast<int>(chosen.size()) == k) {
            fn(chosen);
            return;
        }
        for (int i = next; i < static_cast<int>(pts.size()); ++i) {
            if (++examined > 2000000)
                throw ScaleLimitError("facet search exceeded the subset budget");
            chosen.push_back(i);
            std::vector<ExponentVec> sub;
            sub.reserve(chosen.size());
            for (int c : chosen) sub.push_back(pts[c]);
            if (affine_rank(sub) == static_cast<int>(chosen.size()) - 1)
                self(self, i + 1);
            chosen.pop_back();
        }
    };
    recurse(recurse, 0);
}

std::vector<int> mask_to_indices(std::uint64_t mask) {
    std::vector<int> out;
    for (int i = 0; i < 64; ++i)
        if ((mask >> i) & 1u) out.push_back(i);
    return out;
}

Int min_over_vertices(const NewtonPolytope& p, const IntVec& q, std::uint64_t* argmin_mask) {
    Int best;
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < p.vertices.size(); ++i) {
        Int v = dot(q, p.vertices[i]);
        if (i == 0 || v < best) {
            best = v;
            mask = std::uint64_t{1} << i;
        } else if (v == best) {
            mask |= std::uint64_t{1} << i;
        }
    }
    if (argmin_mask) *argmin_mask = mask;
    return best;
}

std::uint64_t face_mask(const Face& f) {
    std::uint64_t m = 0;
    for (int i : f.vertex_indices) m |= std::uint64_t{1} << i;
    return m;
}

}  // namespace

NewtonPolytope newton_polytope(const Polynomial& f) {
    if (f.is_zero())
        throw DomainError("zero polynomial has empty Newton polyhedron");
    if (f.var_count() > kMaxVariables)
        throw ScaleLimitError("more than " + std::to_string(kMaxVariables) +
                              " variables; exact geometry refuses");
    if (f.term_count() > kMaxSupportPoints)
        throw ScaleLimitError("more than " + std::to_string(kMaxSupportPoints) +
                              " support points; exact geometry refuses");

    NewtonPolytope p;
    p.n = f.var_count();
    p.support = f.support();  // sorted: map iteration order
    const auto& pts = p.support;

    // Affine hull: direction-space rank and the equalities cutting it out.
    p.dim = affine_rank(pts);
    {
        RatMat diffs;
        for (std::size_t i = 1; i < pts.size(); ++i) {
            RatVec row;
            for (int j = 0; j < p.n; ++j) row.push_back(Rat(pts[i][j] - pts[0][j]));
            diffs.push_back(std::move(row));
        }
        for (IntVec& a : integer_nullspace(std::move(diffs), p.n)) {
            Int b = dot(a, pts[0]);
            p.affine_hull.push_back({std::move(a), std::move(b)});
        }
    }

    if (p.dim == 0) {
        p.vertices = pts;  // single point
        return p;
    }

    // Facets: every affinely independent dim-subset spans a candidate
    // hyperplane (within the hull); keep the one-sided ones.
    RatMat hull_rows;
    for (const AffineEquality& eq : p.affine_hull) {
        RatVec row;
        for (const Int& x : eq.normal) row.push_back(Rat(x));
        hull_rows.push_back(std::move(row));
    }
    std::set<std::pair<std::vector<std::string>, std::string>> seen;
    for_each_affinely_independent_subset(pts, p.dim, [&](const std::vector<int>& subset) {
        // Normal: orthogonal to the subset's differences and to the hull's
        // orthogonal space (so it lies in the hull's direction space).
        RatMat m = hull_rows;
        for (std::size_t i = 1; i < subset.size(); ++i) {
            RatVec row;
            for (int j = 0; j < p.n; ++j)
                row.push_back(Rat(pts[subset[i]][j] - pts[subset[0]][j]));
            m.push_back(std::move(row));
        }
        std::vector<IntVec> null = integer_nullspace(std::move(m), p.n);
        if (null.size() != 1) return;  // subset degenerate within the hull
        IntVec g = std::move(null[0]);
        Int c = dot(g, pts[subset[0]]);
        bool any_below = false, any_above = false;
        for (const ExponentVec& a : pts) {
            Int v = dot(g, a);
            if (v < c) any_below = true;
            if (v > c) any_above = true;
        }
        if (any_below && any_above) return;  // not one-sided
        if (any_below) {
            for (Int& x : g) x = -x;
            c = -c;
        }
        std::vector<std::string> key;
        for (const Int& x : g) key.push_back(x.get_str());
        if (seen.emplace(std::move(key), c.get_str()).second)
            p.facets.push_back({std::move(g), std::move(c)});
    });
    std::sort(p.facets.begin(), p.facets.end(), [](const Facet& a, const Facet& b) {
        if (a.normal != b.normal) return a.normal < b.normal;
        return a.offset < b.offset;
    });

    // Vertices: support points whose active equalities pin them uniquely.
    for (const ExponentVec& a : pts) {
        RatMat rows = hull_rows;
        for (const Facet& facet : p.facets) {
            if (dot(facet.normal, a) != facet.offset) continue;
            RatVec row;
            for (const Int& x : facet.normal) row.push_back(Rat(x));
            rows.push_back(std::move(row));
        }
        if (rank_of(std::move(rows)) == p.n) p.vertices.push_back(a);
    }
    if (p.vertices.empty())
        throw std::logic_error("polytope of positive dimension without vertices");
    return p;
}

std::pair<Rat, Face> supporting_face(const NewtonPolytope& p, const RatVec& q) {
    if (static_cast<int>(q.size()) != p.n)
        throw DomainError("functional length does not match the ambient dimension");
    bool all_zero = true;
    for (const Rat& x : q)
        if (x != 0) { all_zero = false; break; }
    if (all_zero) throw DomainError("zero functional has no supporting face");

    Rat d;
    std::vector<int> argmin;
    for (std::size_t i = 0; i < p.vertices.size(); ++i) {
        Rat v = dot(q, p.vertices[i]);
        if (i == 0 || v < d) {
            d = v;
            argmin.assign(1, static_cast<int>(i));
        } else if (v == d) {
            argmin.push_back(static_cast<int>(i));
        }
    }

    Face face;
    face.vertex_indices = argmin;
    std::vector<ExponentVec> sel;
    for (int i : argmin) sel.push_back(p.vertices[i]);
    face.dim = affine_rank(sel);
    face.improper = argmin.size() == p.vertices.size();
    face.witness_normal = primitive_integer(q);
    face.offset = min_over_vertices(p, face.witness_normal, nullptr);
    for (const Rat& x : q) {
        if (x < 0) {
            face.at_infinity = true;
            break;
        }
    }
    return {d, face};
}

std::vector<Face> enumerate_faces(const NewtonPolytope& p) {
    std::vector<Face> faces;

    std::uint64_t full = p.vertices.size() == 64
                             ? ~std::uint64_t{0}
                             : (std::uint64_t{1} << p.vertices.size()) - 1;

    // The improper face: the polytope itself.  It is the argmin of some
    // functional only when the polytope is not full-dimensional (any affine-
    // hull normal is constant on it).
    Face whole;
    whole.vertex_indices = mask_to_indices(full);
    whole.dim = p.dim;
    whole.improper = true;
    if (p.dim < p.n) {
        whole.witness_normal = p.affine_hull.front().normal;
        whole.offset = p.affine_hull.front().offset;
    } else {
        whole.has_witness = false;
    }
    faces.push_back(std::move(whole));

    if (p.dim > 0) {
        // Proper faces are exactly the nonempty intersections of facet
        // vertex sets: close the facet masks under pairwise intersection.
        std::vector<std::uint64_t> facet_masks;
        for (const Facet& facet : p.facets) {
            std::uint64_t m = 0;
            for (std::size_t i = 0; i < p.vertices.size(); ++i)
                if (dot(facet.normal, p.vertices[i]) == facet.offset)
                    m |= std::uint64_t{1} << i;
            facet_masks.push_back(m);
        }
        std::set<std::uint64_t> masks(facet_masks.begin(), facet_masks.end());
        masks.erase(0);
        std::vector<std::uint64_t> work(masks.begin(), masks.end());
        while (!work.empty()) {
            std::uint64_t m = work.back();
            work.pop_back();
            for (std::uint64_t fm : facet_masks) {
                std::uint64_t inter = m & fm;
                if (inter == 0) continue;
                if (masks.insert(inter).second) work.push_back(inter);
            }
        }

        for (std::uint64_t mask : masks) {
            if (mask == full) continue;  // improper face already added
            Face face;
            face.vertex_indices = mask_to_indices(mask);
            std::vector<ExponentVec> sel;
            for (int i : face.vertex_indices) sel.push_back(p.vertices[i]);
            face.dim = affine_rank(sel);
            // Witness: the sum of the normals of all facets containing the
            // face lies in the relative interior of its normal cone.
            RatVec q(p.n, Rat(0));
            Int unused;
            for (std::size_t fi = 0; fi < facet_masks.size(); ++fi) {
                if ((mask & ~facet_masks[fi]) != 0) continue;
                for (int j = 0; j < p.n; ++j) q[j] += Rat(p.facets[fi].normal[j]);
            }
            face.witness_normal = primitive_integer(q);
            std::uint64_t argmin = 0;
            face.offset = min_over_vertices(p, face.witness_normal, &argmin);
            if (argmin != mask)
                throw std::logic_error("face witness does not reproduce its face");
            faces.push_back(std::move(face));
        }
    }

    std::sort(faces.begin(), faces.end(), [](const Face& a, const Face& b) {
        if (a.dim != b.dim) return a.dim < b.dim;
        return a.vertex_indices < b.vertex_indices;
    });
    return faces;
}

void boundary_at_infinity(const NewtonPolytope& p, std::vector<Face>& faces) {
    for (Face& face : faces) {
        face.at_infinity = false;
        if (!face.has_witness && face.improper && p.dim == p.n)
            continue;  // f itself is never the argmin of a nonzero functional

        const ExponentVec& v0 = p.vertices[face.vertex_indices.front()];
        std::uint64_t mask = face_mask(face);

        std::vector<LinearConstraint> base;
        for (std::size_t k = 1; k < face.vertex_indices.size(); ++k) {
            const ExponentVec& v = p.vertices[face.vertex_indices[k]];
            RatVec row(p.n);
            for (int j = 0; j < p.n; ++j) row[j] = Rat(v[j] - v0[j]);
            base.push_back(eq_constraint(std::move(row), Rat(0)));
        }
        for (std::size_t i = 0; i < p.vertices.size(); ++i) {
            if ((mask >> i) & 1u) continue;
            RatVec row(p.n);
            for (int j = 0; j < p.n; ++j) row[j] = Rat(p.vertices[i][j] - v0[j]);
            base.push_back(ge_constraint(std::move(row), Rat(1)));
        }

        for (int k = 0; k < p.n && !face.at_infinity; ++k) {
            std::vector<LinearConstraint> cons = base;
            RatVec row(p.n, Rat(0));
            row[k] = Rat(-1);
            cons.push_back(ge_constraint(std::move(row), Rat(1)));  // q_k <= -1
            std::optional<RatVec> q = find_feasible_point(p.n, cons);
            if (!q) continue;
            face.at_infinity = true;
            face.witness_normal = primitive_integer(*q);
            std::uint64_t argmin = 0;
            face.offset = min_over_vertices(p, face.witness_normal, &argmin);
            if (argmin != mask)
                throw std::logic_error("at-infinity witness does not reproduce its face");
        }
    }
}

std::vector<ExponentVec> lattice_points(const NewtonPolytope& p) {
    ExponentVec lo = p.vertices.front(), hi = p.vertices.front();
    for (const ExponentVec& v : p.vertices) {
        for (int j = 0; j < p.n; ++j) {
            lo[j] = std::min(lo[j], v[j]);
            hi[j] = std::max(hi[j], v[j]);
        }
    }
    std::uint64_t box = 1;
    for (int j = 0; j < p.n; ++j) {
        box *= static_cast<std::uint64_t>(hi[j] - lo[j] + 1);
        if (box > kMaxLatticeBox)
            throw ScaleLimitError("lattice bounding box exceeds the scan limit");
    }

    std::vector<ExponentVec> out;
    ExponentVec x = lo;
    while (true) {
        bool inside = true;
        for (const AffineEquality& eq : p.affine_hull) {
            if (dot(eq.normal, x) != eq.offset) {
                inside = false;
                break;
            }
        }
        if (inside) {
            for (const Facet& facet : p.facets) {
                if (dot(facet.normal, x) < facet.offset) {
                    inside = false;
                    break;
                }
            }
        }
        if (inside) out.push_back(x);
        int j = p.n - 1;
        while (j >= 0 && x[j] == hi[j]) {
            x[j] = lo[j];
            --j;
        }
        if (j < 0) break;
        ++x[j];
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<ExponentVec> lattice_points(const NewtonPolytope& p, const Face& face) {
    if (face.improper) return lattice_points(p);
    if (!face.has_witness)
        throw DomainError("face carries no witness functional");
    std::vector<ExponentVec> out;
    for (ExponentVec& x : lattice_points(p)) {
        if (dot(face.witness_normal, x) == face.offset) out.push_back(std::move(x));
    }
    return out;
}

std::pair<Rat, Rat> comparability_constants(const NewtonPolytope& p) {
    std::size_t count = lattice_points(p).size();
    return {make_rat(1, static_cast<long>(count)), Rat(1)};
}

Rat abs_monomial_sum(const std::vector<ExponentVec>& exponents, const std::vector<Rat>& x) {
    if (exponents.empty()) return Rat(0);
    int n = static_cast<int>(x.size());
    std::vector<int> max_exp(n, 0);
    for (const ExponentVec& a : exponents) {
        if (static_cast<int>(a.size()) != n)
            throw DomainError("exponent length does not match the point");
        for (int j = 0; j < n; ++j) max_exp[j] = std::max(max_exp[j], a[j]);
    }
    std::vector<std::vector<Rat>> powers(n);
    for (int j = 0; j < n; ++j) {
        powers[j].resize(max_exp[j] + 1);
        powers[j][0] = Rat(1);
        Rat a = abs(x[j]);
        for (int e = 1; e <= max_exp[j]; ++e) powers[j][e] = powers[j][e - 1] * a;
    }
    Rat acc(0);
    for (const ExponentVec& a : exponents) {
        Rat v(1);
        for (int j = 0; j < n; ++j)
            if (a[j] > 0) v *= powers[j][a[j]];
        acc += v;
    }
    return acc;
}

Polynomial face_polynomial(const Polynomial& f, const NewtonPolytope& p, const Face& face) {
    if (f.var_count() != p.n)
        throw DomainError("polynomial does not match the polytope's dimension");
    if (face.improper) return f;
    if (!face.has_witness || face.witness_normal.empty())
        throw DomainError("face carries no witness functional");
    std::uint64_t argmin = 0;
    Int d = min_over_vertices(p, face.witness_normal, &argmin);
    if (d != face.offset || argmin != face_mask(face))
        throw DomainError("face does not belong to this polytope");
    Polynomial out(f.var_count());
    for (const auto& [alpha, c] : f.terms()) {
        if (dot(face.witness_normal, alpha) == face.offset) out.add_term(alpha, c);
    }
    return out;
}

nlohmann::ordered_json polytope_to_json(const NewtonPolytope& p,
                                        const std::vector<Face>& faces) {
    nlohmann::ordered_json j;
    j["dim"] = p.dim;
    nlohmann::ordered_json verts = nlohmann::ordered_json::array();
    for (const ExponentVec& v : p.vertices) verts.push_back(v);
    j["vertices"] = std::move(verts);
    nlohmann::ordered_json facets = nlohmann::ordered_json::array();
    for (const Facet& facet : p.facets) {
        nlohmann::ordered_json fj;
        nlohmann::ordered_json normal = nlohmann::ordered_json::array();
        for (const Int& x : facet.normal) normal.push_back(x.get_si());
        fj["normal"] = std::move(normal);
        fj["offset"] = facet.offset.get_si();
        facets.push_back(std::move(fj));
    }
    j["facets"] = std::move(facets);
    nlohmann::ordered_json fl = nlohmann::ordered_json::array();
    for (const Face& face : faces) {
        nlohmann::ordered_json fj;
        fj["vertices"] = face.vertex_indices;
        fj["dim"] = face.dim;
        if (face.has_witness) {
            nlohmann::ordered_json q = nlohmann::ordered_json::array();
            for (const Int& x : face.witness_normal) q.push_back(x.get_si());
            fj["q"] = std::move(q);
            fj["d"] = face.offset.get_si();
        } else {
            fj["q"] = nullptr;
            fj["d"] = nullptr;
        }
        fj["at_infinity"] = face.at_infinity;
        fl.push_back(std::move(fj));
    }
    j["faces"] = std::move(fl);
    return j;
}

std::string geometry_digest(const NewtonPolytope& p, const std::vector<Face>& faces) {
    std::string dump = polytope_to_json(p, faces).dump();
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string polytope_to_svg(const NewtonPolytope& p, const std::vector<Face>& faces) {
    if (p.n != 2) throw DomainError("SVG rendering is only available for two variables");

    int lo_x = p.vertices[0][0], hi_x = lo_x, lo_y = p.vertices[0][1], hi_y = lo_y;
    for (const ExponentVec& v : p.support) {
        lo_x = std::min(lo_x, v[0]); hi_x = std::max(hi_x, v[0]);
        lo_y = std::min(lo_y, v[1]); hi_y = std::max(hi_y, v[1]);
    }
    lo_x = std::min(lo_x, 0); lo_y = std::min(lo_y, 0);
    const double unit = 48.0, margin = 36.0;
    auto px = [&](int gx) { return margin + unit * (gx - lo_x); };
    auto py = [&](int gy) { return margin + unit * (hi_y - gy); };
    auto fmt = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.1f", v);
        return std::string(buf);
    };
    double width = 2 * margin + unit * (hi_x - lo_x);
    double height = 2 * margin + unit * (hi_y - lo_y);

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width)
        << "\" height=\"" << fmt(height) << "\" viewBox=\"0 0 " << fmt(width) << ' '
        << fmt(height) << "\">\n";
    svg << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // Grid of integer points in the bounding box.
    for (int gx = lo_x; gx <= hi_x; ++gx)
        for (int gy = lo_y; gy <= hi_y; ++gy)
            svg << "  <circle cx=\"" << fmt(px(gx)) << "\" cy=\"" << fmt(py(gy))
                << "\" r=\"1.5\" fill=\"#cccccc\"/>\n";

    // Hull outline: vertices in cyclic order around the centroid.
    if (p.vertices.size() >= 2) {
        double cx = 0, cy = 0;
        for (const ExponentVec& v : p.vertices) {
            cx += v[0];
            cy += v[1];
        }
        cx /= static_cast<double>(p.vertices.size());
        cy /= static_cast<double>(p.vertices.size());
        std::vector<int> order(p.vertices.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            double aa = std::atan2(p.vertices[a][1] - cy, p.vertices[a][0] - cx);
            double ab = std::atan2(p.vertices[b][1] - cy, p.vertices[b][0] - cx);
            if (aa != ab) return aa < ab;
            return a < b;
        });
        svg << "  <polygon points=\"";
        for (std::size_t i = 0; i < order.size(); ++i) {
            if (i) svg << ' ';
            const ExponentVec& v = p.vertices[order[i]];
            svg << fmt(px(v[0])) << ',' << fmt(py(v[1]));
        }
        svg << "\" fill=\"#e8f0fe\" stroke=\"none\"/>\n";
    }

    // Edges; the at-infinity ones highlighted.
    for (const Face& face : faces) {
        if (face.dim != 1 || face.vertex_indices.size() < 2 ||
            (face.improper && p.dim != 1))
            continue;
        const ExponentVec& a = p.vertices[face.vertex_indices.front()];
        const ExponentVec& b = p.vertices[face.vertex_indices.back()];
        svg << "  <line x1=\"" << fmt(px(a[0])) << "\" y1=\"" << fmt(py(a[1]))
            << "\" x2=\"" << fmt(px(b[0])) << "\" y2=\"" << fmt(py(b[1])) << "\" stroke=\""
            << (face.at_infinity ? "#d62728" : "#1f3b70") << "\" stroke-width=\""
            << (face.at_infinity ? "4" : "2") << "\"/>\n";
    }

    // Support points and vertices (at-infinity vertices ringed).
    for (const ExponentVec& s : p.support)
        svg << "  <circle cx=\"" << fmt(px(s[0])) << "\" cy=\"" << fmt(py(s[1]))
            << "\" r=\"3.5\" fill=\"#333333\"/>\n";
    for (const Face& face : faces) {
        if (face.dim != 0 || face.improper) continue;
        const ExponentVec& v = p.vertices[face.vertex_indices.front()];
        svg << "  <circle cx=\"" << fmt(px(v[0])) << "\" cy=\"" << fmt(py(v[1]))
            << "\" r=\"6\" fill=\"none\" stroke=\""
            << (face.at_infinity ? "#d62728" : "#1f3b70") << "\" stroke-width=\"2\"/>\n";
    }
    for (const ExponentVec& v : p.vertices)
        svg << "  <text x=\"" << fmt(px(v[0]) + 8) << "\" y=\"" << fmt(py(v[1]) - 8)
            << "\" font-size=\"12\" font-family=\"monospace\" fill=\"#333333\">(" << v[0]
            << ',' << v[1] << ")</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace nwc
