"""One-shot ROS 2 graph probe emitting a resource interface catalog."""

from .probe import (GraphSource, ProbeOutput, expand_message_type, probe_graph,
                    render_catalog)

__all__ = ["GraphSource", "ProbeOutput", "expand_message_type", "probe_graph",
           "render_catalog"]

__version__ = "0.1.0"
