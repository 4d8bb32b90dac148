#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace hetnet
{

struct Point
{
    double x = 0.0;
    double y = 0.0;
};

inline double distance2(Point a, Point b)
{
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

//---------------------------------------------------------------------------//
/*!
 * Bucket grid over the square [-half_width, half_width]^2.
 *
 * Points outside the square are clamped into the border cells, so queries
 * stay correct (only slower) for stray points.
 */
class SpatialGrid
{
  public:
    struct Hit
    {
        std::size_t index = 0;
        double d2 = INFINITY;
    };

    SpatialGrid(const std::vector<Point>& points, double half_width, double points_per_cell = 2.0);

    [[nodiscard]] bool empty() const { return points_.empty(); }
    [[nodiscard]] const std::vector<Point>& points() const { return points_; }

    //! Nearest point to q; index is meaningless when empty().
    [[nodiscard]] Hit nearest(Point q) const;

    //! Call f(index, d2) for every point with d2 < radius^2.
    template<class F>
    void for_each_within(Point q, double radius, F&& f) const;

  private:
    [[nodiscard]] int cell_coord(double v) const;

    std::vector<Point> points_;
    double origin_ = 0.0;
    double cell_ = 1.0;
    int dim_ = 1;
    std::vector<std::uint32_t> offsets_;  // CSR row starts, size dim_^2 + 1
    std::vector<std::uint32_t> order_;    // point indices grouped by cell
};

template<class F>
void SpatialGrid::for_each_within(Point q, double radius, F&& f) const
{
    if (points_.empty() || !(radius > 0.0))
    {
        return;
    }
    const double r2 = radius * radius;
    const int x0 = cell_coord(q.x - radius);
    const int x1 = cell_coord(q.x + radius);
    const int y0 = cell_coord(q.y - radius);
    const int y1 = cell_coord(q.y + radius);
    for (int cy = y0; cy <= y1; ++cy)
    {
        for (int cx = x0; cx <= x1; ++cx)
        {
            const std::size_t cell = static_cast<std::size_t>(cy) * dim_ + cx;
            for (std::uint32_t k = offsets_[cell]; k < offsets_[cell + 1]; ++k)
            {
                const std::uint32_t i = order_[k];
                const double d2 = distance2(points_[i], q);
                if (d2 < r2)
                {
                    f(static_cast<std::size_t>(i), d2);
                }
            }
        }
    }
}

}  // namespace hetnet
