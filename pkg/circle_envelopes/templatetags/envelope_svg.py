from django import template

register = template.Library()


@register.filter(name='svg_number')
def svg_number(value):
    """
    Compact fixed-precision number; '-0' is written as '0'.
    """
    text = '{:.6g}'.format(float(value))
    return '0' if text == '-0' else text


@register.filter(name='svg_points')
def svg_points(points):
    """
    "x,y x,y ..." with y mirrored into SVG's downward axis.
    """
    return ' '.join('{},{}'.format(svg_number(x), svg_number(-y)) for x, y in points)


@register.filter(name='svg_y')
def svg_y(value):
    return svg_number(-float(value))


@register.simple_tag(name='view_box')
def view_box(bounds):
    xmin, ymin, xmax, ymax = bounds
    return ' '.join(svg_number(value) for value in (xmin, -ymax, xmax - xmin, ymax - ymin))
