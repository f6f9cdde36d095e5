// Copyright The blochrough Authors.
// SPDX-License-Identifier: Apache-2.0

#include "blochrough/system_assembly.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include "blochrough/cyclic_dft.hpp"
#include "blochrough/errors.hpp"

namespace blochrough
{

namespace
{

struct ElementGeometry
{
  std::array<int, 3> basis;
  std::array<Point2, 3> p;
  std::array<double, 3> g1, g2;
  double area;
};

ElementGeometry element_geometry(const PeriodicCellMesh &mesh, int e)
{
  ElementGeometry g;
  g.basis = mesh.element_basis(e);
  for (int v = 0; v < 3; v++)
  {
    g.p[v] = mesh.nodes[mesh.triangles[e][v]];
  }
  const double area2 = (g.p[1].x1 - g.p[0].x1) * (g.p[2].x2 - g.p[0].x2) -
                       (g.p[2].x1 - g.p[0].x1) * (g.p[1].x2 - g.p[0].x2);
  for (int v = 0; v < 3; v++)
  {
    const Point2 &a = g.p[(v + 1) % 3], &b = g.p[(v + 2) % 3];
    g.g1[v] = (a.x2 - b.x2) / area2;
    g.g2[v] = (b.x1 - a.x1) / area2;
  }
  g.area = 0.5 * area2;
  return g;
}

// Column sets of the P1 stencil; bottom rows are left empty unless requested.
std::vector<std::set<int>> stencil(const PeriodicCellMesh &mesh, bool bottom_rows)
{
  std::vector<std::set<int>> rows(mesh.M_prime);
  for (std::size_t e = 0; e < mesh.triangles.size(); e++)
  {
    const auto b = mesh.element_basis(static_cast<int>(e));
    for (int r : b)
    {
      if (r < mesh.M || bottom_rows)
      {
        rows[r].insert(b.begin(), b.end());
      }
    }
  }
  return rows;
}

std::vector<std::vector<int>> to_rows(const std::vector<std::set<int>> &sets)
{
  std::vector<std::vector<int>> out(sets.size());
  for (std::size_t i = 0; i < sets.size(); i++)
  {
    out[i].assign(sets[i].begin(), sets[i].end());
  }
  return out;
}

}  // namespace

DiagonalBlockAssembler::DiagonalBlockAssembler(const PeriodicCellMesh &mesh, const DtNConfig &dtn,
                                               AssemblyOptions options)
  : mesh_(mesh), dtn_(dtn), options_(options), top_(mesh.top_basis())
{
  auto rows = stencil(mesh, false);
  if (options_.include_dtn)
  {
    for (int a : top_)
    {
      rows[a].insert(top_.begin(), top_.end());
    }
  }
  for (int b = mesh.M; b < mesh.M_prime; b++)
  {
    rows[b].insert(b);
  }
  K_ = csr_from_rows(mesh.M_prime, to_rows(rows));
  Mass_ = K_;
  S_ = K_;

  for (int e = 0; e < static_cast<int>(mesh.triangles.size()); e++)
  {
    const ElementGeometry g = element_geometry(mesh, e);
    for (int a = 0; a < 3; a++)
    {
      const int m = g.basis[a];
      if (m >= mesh.M)
      {
        continue;
      }
      for (int b = 0; b < 3; b++)
      {
        const int l = g.basis[b];
        const int p = K_.find(m, l);
        K_.values[p] += g.area * (g.g1[a] * g.g1[b] + g.g2[a] * g.g2[b]);
        Mass_.values[p] += g.area / 12.0 * (a == b ? 2.0 : 1.0);
        // i (C[m,l] - C[l,m]) with C[m,l] = int d1(phi_l) phi_m = d1(phi_l) area / 3.
        S_.values[p] += cplx(0.0, g.area / 3.0 * (g.g1[b] - g.g1[a]));
      }
    }
  }

  if (options_.include_dtn)
  {
    hat_table_ = hat_fourier_table(mesh, dtn_.J);
    const int nt = static_cast<int>(top_.size());
    top_pos_.resize(std::size_t(nt) * nt);
    for (int a = 0; a < nt; a++)
    {
      for (int b = 0; b < nt; b++)
      {
        top_pos_[std::size_t(a) * nt + b] = K_.find(top_[a], top_[b]);
      }
    }
  }
}

CsrMatrix DiagonalBlockAssembler::combine(double c0, double c1, double c2,
                                          const DenseMatrix *dtn) const
{
  CsrMatrix A = K_;
  const double k2 = dtn_.k * dtn_.k;
  for (int i = 0; i < mesh_.M; i++)
  {
    for (int p = A.row_ptr[i]; p < A.row_ptr[i + 1]; p++)
    {
      A.values[p] = c0 * (K_.values[p] - k2 * Mass_.values[p]) + c1 * S_.values[p] +
                    c2 * Mass_.values[p];
    }
  }
  if (dtn)
  {
    const int nt = static_cast<int>(top_.size());
    for (int a = 0; a < nt; a++)
    {
      for (int b = 0; b < nt; b++)
      {
        A.values[top_pos_[std::size_t(a) * nt + b]] += (*dtn)(a, b);
      }
    }
  }
  for (int b = mesh_.M; b < mesh_.M_prime; b++)
  {
    A.values[A.find(b, b)] = 1.0;
  }
  return A;
}

CsrMatrix DiagonalBlockAssembler::block(const BlochGrid &grid, int j) const
{
  const double len = grid.step();
  if (options_.frozen_alpha)
  {
    const double a = *options_.frozen_alpha;
    DenseMatrix Q;
    if (options_.include_dtn)
    {
      Q = dtn_bilinear_matrix(dtn_, mesh_, a);
      for (auto &q : Q.data)
      {
        q *= len;
      }
    }
    return combine(len, len * a, len * a * a, options_.include_dtn ? &Q : nullptr);
  }
  const double a = grid.alphas[j];
  // int alpha = len alpha_j, int alpha^2 = len (alpha_j^2 + len^2 / 12) over the interval.
  DenseMatrix Q;
  if (options_.include_dtn)
  {
    Q = dtn_interval_matrix(dtn_, mesh_, hat_table_, a - 0.5 * len, a + 0.5 * len);
  }
  return combine(len, len * a, len * (a * a + len * len / 12.0),
                 options_.include_dtn ? &Q : nullptr);
}

CsrMatrix DiagonalBlockAssembler::single_alpha_form(double alpha) const
{
  DenseMatrix Q;
  if (options_.include_dtn)
  {
    Q = dtn_bilinear_matrix(dtn_, mesh_, alpha);
  }
  return combine(1.0, alpha, alpha * alpha, options_.include_dtn ? &Q : nullptr);
}

CsrMatrix assemble_diagonal_block(int j, const PeriodicCellMesh &mesh, const DtNConfig &dtn,
                                  const BlochGrid &grid, AssemblyOptions options)
{
  if (j < 0 || j >= grid.N)
  {
    throw ParameterError("alpha index out of range");
  }
  return DiagonalBlockAssembler(mesh, dtn, options).block(grid, j);
}

CouplingGeometry coupling_geometry(const PeriodicCellMesh &mesh, const FlatteningMap &map)
{
  const TriangleRule &rule = triangle_rule_degree5();
  CouplingGeometry geo;
  std::vector<double> x1;
  for (int e = 0; e < static_cast<int>(mesh.triangles.size()); e++)
  {
    const ElementGeometry g = element_geometry(mesh, e);
    CouplingGeometry::Element el{g.basis, g.g1, g.g2, static_cast<int>(geo.x2.size()), 0};
    for (std::size_t q = 0; q < rule.weights.size(); q++)
    {
      const auto &l = rule.points[q];
      const double y = l[0] * g.p[0].x2 + l[1] * g.p[1].x2 + l[2] * g.p[2].x2;
      if (y >= map.H0())
      {
        continue;
      }
      x1.push_back(l[0] * g.p[0].x1 + l[1] * g.p[1].x1 + l[2] * g.p[2].x1);
      geo.x2.push_back(y);
      geo.weight.push_back(rule.weights[q] * g.area);
      geo.blend.push_back(map.blend(y));
      geo.blend_slope.push_back(map.blend_slope(y));
      geo.lambda.push_back(l);
      el.num_qp++;
    }
    if (el.num_qp > 0)
    {
      geo.elements.push_back(el);
    }
  }
  // Structured meshes repeat a few x1 offsets per column; tabulate each once.
  std::vector<int> order(x1.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return x1[a] < x1[b]; });
  geo.x1_index.resize(x1.size());
  const double tol = 1e-12 * mesh.period;
  for (std::size_t i = 0; i < order.size(); i++)
  {
    const double v = x1[order[i]];
    if (geo.unique_x1.empty() || v - geo.unique_x1.back() > tol)
    {
      geo.unique_x1.push_back(v);
    }
    geo.x1_index[order[i]] = static_cast<int>(geo.unique_x1.size()) - 1;
  }
  return geo;
}

std::vector<int> window_cells(int N)
{
  std::vector<int> cells;
  for (int m = -N / 2 + 1; m <= N / 2; m++)
  {
    cells.push_back(m);
  }
  return cells;
}

CouplingTables coupling_tables(const CouplingGeometry &geo, const BlochGrid &grid,
                               const CoefficientField &field, const std::vector<int> &cells)
{
  CouplingTables t;
  t.cells = cells;
  const int U = static_cast<int>(geo.unique_x1.size());
  const int nc = static_cast<int>(cells.size());
  const std::size_t n = std::size_t(U) * nc;
  t.phase.resize(n);
  t.s.resize(n);
  t.ds.resize(n);
  t.zeta_minus_h0.resize(n);
  t.slope.resize(n);
  t.twist.resize(std::size_t(U) * grid.N);
  const double h0 = field.map().h0();
  const bool flat = field.is_trivial();
#pragma omp parallel for schedule(static)
  for (int u = 0; u < U; u++)
  {
    const double x1 = geo.unique_x1[u];
    for (int c = 0; c < nc; c++)
    {
      const double X = x1 + grid.period * cells[c];
      const std::size_t i = t.at(u, c);
      const Envelope env = kernel_envelope(grid, X);
      t.phase[i] = std::polar(grid.c_lambda, -grid.alphas[0] * X);
      t.s[i] = env.s;
      t.ds[i] = env.ds;
      if (flat)
      {
        t.zeta_minus_h0[i] = 0.0;
        t.slope[i] = 0.0;
      }
      else
      {
        const ProfileSample z = field.map().profile().eval(X);
        t.zeta_minus_h0[i] = z.height - h0;
        t.slope[i] = z.slope;
      }
    }
    for (int j = 0; j < grid.N; j++)
    {
      t.twist[std::size_t(u) * grid.N + j] = std::polar(1.0, -j * grid.step() * x1);
    }
  }
  return t;
}

CsrMatrix CouplingBlocks::block(int n, int j) const
{
  CsrMatrix B = pattern;
  B.values = values[std::size_t(n) * N + j];
  return B;
}

void CouplingBlocks::apply_add(const cplx *x, cplx *y) const
{
#pragma omp parallel for schedule(static)
  for (int n = 0; n < N; n++)
  {
    cplx *yn = y + std::size_t(n) * M_prime;
    for (int i = 0; i < M; i++)
    {
      cplx acc = 0.0;
      for (int j = 0; j < N; j++)
      {
        const cplx *v = values[std::size_t(n) * N + j].data();
        const cplx *xj = x + std::size_t(j) * M_prime;
        for (int p = pattern.row_ptr[i]; p < pattern.row_ptr[i + 1]; p++)
        {
          acc += v[p] * xj[pattern.col_idx[p]];
        }
      }
      yn[i] += acc;
    }
  }
}

CouplingBlocks assemble_coupling_explicit(const PeriodicCellMesh &mesh, const BlochGrid &grid,
                                          const CoefficientField &field, double k,
                                          const std::vector<int> &cells, CouplingPart part,
                                          double max_entries)
{
  const int N = grid.N;
  CouplingBlocks B;
  B.N = N;
  B.M = mesh.M;
  B.M_prime = mesh.M_prime;
  B.pattern = csr_from_rows(mesh.M_prime, to_rows(stencil(mesh, false)));
  const double entries = double(N) * N * B.pattern.nnz();
  if (entries > max_entries)
  {
    std::ostringstream msg;
    msg << "explicit coupling needs " << entries << " entries (limit " << max_entries
        << "); use the matrix-free coupling";
    throw StorageGuardError(msg.str());
  }
  B.values.assign(std::size_t(N) * N, std::vector<cplx>(B.pattern.nnz(), 0.0));

  const CouplingGeometry geo = coupling_geometry(mesh, field.map());
  const CouplingTables tab = coupling_tables(geo, grid, field, cells);
  const bool want_stiff = part != CouplingPart::mass;
  const bool want_mass = part != CouplingPart::stiffness;
  const double k2 = k * k;
  const int nc = static_cast<int>(cells.size());
  std::vector<cplx> kv(N), kd(N);

  for (const auto &el : geo.elements)
  {
    int pos[3][3];
    for (int a = 0; a < 3; a++)
    {
      for (int b = 0; b < 3; b++)
      {
        pos[a][b] = el.basis[a] < mesh.M ? B.pattern.find(el.basis[a], el.basis[b]) : -1;
      }
    }
    for (int q = el.first_qp; q < el.first_qp + el.num_qp; q++)
    {
      const int u = geo.x1_index[q];
      const auto &lam = geo.lambda[q];
      for (int c = 0; c < nc; c++)
      {
        const std::size_t i = tab.at(u, c);
        const ThetaCoefficients co = perturbation_from(geo.blend[q], geo.blend_slope[q],
                                                       tab.zeta_minus_h0[i], tab.slope[i]);
        const double w = geo.weight[q];
        for (int j = 0; j < N; j++)
        {
          // C exp(-i alpha_j X) s and its x1 derivative.
          const cplx e = tab.phase[i] * tab.twist[std::size_t(u) * N + j] *
                         std::polar(1.0, -2.0 * pi * double((long(j) * cells[c]) % N) / N);
          kv[j] = e * tab.s[i];
          kd[j] = e * cplx(tab.ds[i], -grid.alphas[j] * tab.s[i]);
        }
        for (int n = 0; n < N; n++)
        {
          for (int j = 0; j < N; j++)
          {
            cplx *vals = B.values[std::size_t(n) * N + j].data();
            for (int a = 0; a < 3; a++)
            {
              if (pos[a][0] < 0)
              {
                continue;
              }
              const cplx v1 = std::conj(kd[n] * lam[a] + kv[n] * el.g1[a]);
              const cplx v2 = std::conj(kv[n] * el.g2[a]);
              const cplx v0 = std::conj(kv[n] * lam[a]);
              for (int b = 0; b < 3; b++)
              {
                const cplx t1 = kd[j] * lam[b] + kv[j] * el.g1[b];
                const cplx t2 = kv[j] * el.g2[b];
                cplx val = 0.0;
                if (want_stiff)
                {
                  val += (co.A.a11 * t1 + co.A.a12 * t2) * v1 + (co.A.a12 * t1 + co.A.a22 * t2) * v2;
                }
                if (want_mass)
                {
                  val -= k2 * co.c * kv[j] * lam[b] * v0;
                }
                vals[pos[a][b]] += w * val;
              }
            }
          }
        }
      }
    }
  }
  return B;
}

struct CouplingOperator::Impl
{
  const PeriodicCellMesh &mesh;
  BlochGrid grid;
  double k;
  CouplingGeometry geo;
  CouplingTables tab;
  std::vector<int> residue;
  CyclicDft dft;

  Impl(const PeriodicCellMesh &m, const BlochGrid &g, const CoefficientField &field, double kk,
       const std::vector<int> &cells, bool fft)
    : mesh(m), grid(g), k(kk), geo(coupling_geometry(m, field.map())),
      tab(coupling_tables(geo, g, field, cells)), dft(g.N, fft)
  {
    for (int c : cells)
    {
      residue.push_back(((c % g.N) + g.N) % g.N);
    }
  }
};

CouplingOperator::CouplingOperator(const PeriodicCellMesh &mesh, const BlochGrid &grid,
                                   const CoefficientField &field, double k,
                                   const std::vector<int> &cells, SumPath path)
{
  const bool fft = path == SumPath::fft || (path == SumPath::automatic && grid.N >= 8);
  impl_ = std::make_unique<Impl>(mesh, grid, field, k, cells, fft);
}

CouplingOperator::~CouplingOperator() = default;

void CouplingOperator::apply_add(const cplx *x, cplx *y) const
{
  const Impl &d = *impl_;
  const int N = d.grid.N;
  const int Mp = d.mesh.M_prime;
  const int M = d.mesh.M;
  const int nc = static_cast<int>(d.residue.size());
  const int ne = static_cast<int>(d.geo.elements.size());
  const double k2 = d.k * d.k;
  const double *alpha = d.grid.alphas.data();
  constexpr int chunk = 2048;
  std::vector<cplx> res(std::size_t(chunk) * 3 * N);

  for (int e0 = 0; e0 < ne; e0 += chunk)
  {
    const int e1 = std::min(ne, e0 + chunk);
#pragma omp parallel
    {
      std::vector<cplx> buf(std::size_t(N) * 24);
      cplx *w0 = buf.data(), *w1 = w0 + N, *w2 = w1 + N;
      cplx *G1 = w2 + N, *G2 = G1 + N;
      cplx *a0 = G2 + N, *a1 = a0 + N, *a2 = a1 + N, *a3 = a2 + N;
      cplx *A0 = a3 + N, *A1 = A0 + N, *A2 = A1 + N, *A3 = A2 + N;
      cplx *B0 = A3 + N, *B1 = B0 + N, *B2 = B1 + N;
      cplx *R0 = B2 + N, *R1 = R0 + N, *R2 = R1 + N;
      cplx *V0 = R2 + N, *V1 = V0 + N, *V2 = V1 + N;
      cplx *S1 = V2 + N, *S2 = S1 + N;
      cplx *wv[3] = {w0, w1, w2};
      cplx *acc[3] = {V0, V1, V2};
#pragma omp for schedule(static)
      for (int e = e0; e < e1; e++)
      {
        const auto &el = d.geo.elements[e];
        for (int v = 0; v < 3; v++)
        {
          for (int j = 0; j < N; j++)
          {
            wv[v][j] = x[std::size_t(j) * Mp + el.basis[v]];
          }
        }
        for (int j = 0; j < N; j++)
        {
          G1[j] = el.g1[0] * w0[j] + el.g1[1] * w1[j] + el.g1[2] * w2[j];
          G2[j] = el.g2[0] * w0[j] + el.g2[1] * w1[j] + el.g2[2] * w2[j];
          V0[j] = V1[j] = V2[j] = S1[j] = S2[j] = 0.0;
        }
        for (int q = el.first_qp; q < el.first_qp + el.num_qp; q++)
        {
          const int u = d.geo.x1_index[q];
          const cplx *tw = &d.tab.twist[std::size_t(u) * N];
          const auto &lam = d.geo.lambda[q];
          for (int j = 0; j < N; j++)
          {
            const cplx p = lam[0] * w0[j] + lam[1] * w1[j] + lam[2] * w2[j];
            a0[j] = tw[j] * p;
            a1[j] = alpha[j] * a0[j];
            a2[j] = tw[j] * G1[j];
            a3[j] = tw[j] * G2[j];
            B0[j] = B1[j] = B2[j] = 0.0;
          }
          d.dft.forward(a0, A0);
          d.dft.forward(a1, A1);
          d.dft.forward(a2, A2);
          d.dft.forward(a3, A3);
          const double phi = d.geo.blend[q], dphi = d.geo.blend_slope[q], w = d.geo.weight[q];
          for (int c = 0; c < nc; c++)
          {
            const int r = d.residue[c];
            const std::size_t i = d.tab.at(u, c);
            const ThetaCoefficients co =
                perturbation_from(phi, dphi, d.tab.zeta_minus_h0[i], d.tab.slope[i]);
            const cplx ph = d.tab.phase[i];
            const double s = d.tab.s[i], ds = d.tab.ds[i];
            const cplx U = ph * s * A0[r];
            const cplx D1 = ph * (ds * A0[r] + s * (A2[r] - cplx(0.0, 1.0) * A1[r]));
            const cplx D2 = ph * s * A3[r];
            const cplx F1 = w * (co.A.a11 * D1 + co.A.a12 * D2);
            const cplx F2 = w * (co.A.a12 * D1 + co.A.a22 * D2);
            const cplx Sm = -w * k2 * co.c * U;
            const cplx phc = std::conj(ph);
            B0[r] += phc * (ds * F1 + s * Sm);
            B1[r] += phc * (s * F1);
            B2[r] += phc * (s * F2);
          }
          d.dft.backward(B0, R0);
          d.dft.backward(B1, R1);
          d.dft.backward(B2, R2);
          for (int n = 0; n < N; n++)
          {
            const cplx ct = std::conj(tw[n]);
            const cplx r1 = ct * R1[n];
            const cplx V = ct * R0[n] + cplx(0.0, alpha[n]) * r1;
            V0[n] += V * lam[0];
            V1[n] += V * lam[1];
            V2[n] += V * lam[2];
            S1[n] += r1;
            S2[n] += ct * R2[n];
          }
        }
        cplx *out = &res[std::size_t(e - e0) * 3 * N];
        for (int v = 0; v < 3; v++)
        {
          for (int n = 0; n < N; n++)
          {
            out[v * N + n] = acc[v][n] + el.g1[v] * S1[n] + el.g2[v] * S2[n];
          }
        }
      }
    }
    // Ordered scatter keeps the result independent of the thread count.
    for (int e = e0; e < e1; e++)
    {
      const auto &el = d.geo.elements[e];
      const cplx *out = &res[std::size_t(e - e0) * 3 * N];
      for (int v = 0; v < 3; v++)
      {
        if (el.basis[v] >= M)
        {
          continue;
        }
        for (int n = 0; n < N; n++)
        {
          y[std::size_t(n) * Mp + el.basis[v]] += out[v * N + n];
        }
      }
    }
  }
}

std::vector<cplx> assemble_rhs(const DirichletTable &table, const PeriodicCellMesh &mesh)
{
  const int Mp = mesh.M_prime;
  std::vector<cplx> F(std::size_t(table.N) * Mp, 0.0);
  for (int j = 0; j < table.N; j++)
  {
    for (int b = 0; b < table.num_bottom; b++)
    {
      F[std::size_t(j) * Mp + mesh.M + b] = table(j, b);
    }
  }
  return F;
}

void BlockSystem::apply(const cplx *x, cplx *y) const
{
#pragma omp parallel for schedule(static)
  for (int j = 0; j < N; j++)
  {
    diag_blocks[j].multiply(x + std::size_t(j) * M_prime, y + std::size_t(j) * M_prime);
  }
  if (coupling)
  {
    coupling->apply_add(x, y);
  }
}

}  // namespace blochrough
