import time

from geometry_msgs.msg import Twist
from nav_msgs.msg import Odometry
from pyskillup.ros2 import ROS2Skill
from pyskillup.annotations import skill, skill_parameter, skill_output, execute, resetting

MAX_VELOCITY = 1.0


@skill(skill_interface="REST", skill_iri="http://example.org/robot/skill#MoveForward")
class MoveForwardSkill(ROS2Skill):

    def __init__(self):
        super().__init__("move_forward")
        self._start_position = None
        self._current_position = None
        self._travelled = 0.0
        self._elapsed = 0.0
        self._applied_velocity = 0.0

    @skill_parameter(name="dist_in", data_type=float,
                     description="Desired travel distance in meters")
    def desired_distance(self) -> float:
        return self._desired_distance

    @skill_parameter(name="time_in", data_type=float,
                     description="Desired travel time in seconds")
    def desired_time(self) -> float:
        return self._desired_time

    @skill_output(name="dist_out", data_type=float,
                  description="Actually travelled distance in meters")
    def travelled_distance(self) -> float:
        return self._travelled

    @skill_output(name="time_out", data_type=float,
                  description="Actual travel time in seconds")
    def elapsed_time(self) -> float:
        return self._elapsed

    @skill_output(name="vel_out", data_type=float,
                  description="Velocity that was applied in m/s")
    def applied_velocity(self) -> float:
        return self._applied_velocity

    def _on_odometry(self, msg: Odometry) -> None:
        position = msg.pose.pose.position
        if self._start_position is None:
            self._start_position = (position.x, position.y)
        self._current_position = (position.x, position.y)

    @execute
    def execute(self) -> None:
        velocity = self.desired_distance / self.desired_time
        travel_time = self.desired_time
        if velocity > MAX_VELOCITY:
            velocity = MAX_VELOCITY
            travel_time = self.desired_distance / MAX_VELOCITY

        publisher = self.node.create_publisher(Twist, "cmd_vel", 10)
        self.node.create_subscription(Odometry, "odom", self._on_odometry, 10)

        command = Twist()
        command.linear.x = velocity
        started = time.monotonic()
        while time.monotonic() - started < travel_time:
            publisher.publish(command)
            self._applied_velocity = velocity
            self.spin_once(timeout_sec=0.05)
        publisher.publish(Twist())
        self._elapsed = time.monotonic() - started
        if self._start_position and self._current_position:
            dx = self._current_position[0] - self._start_position[0]
            dy = self._current_position[1] - self._start_position[1]
            self._travelled = (dx ** 2 + dy ** 2) ** 0.5

    @resetting
    def resetting(self) -> None:
        publisher = self.node.create_publisher(Twist, "cmd_vel", 10)
        publisher.publish(Twist())
        self._start_position = None
        self._current_position = None
        self._travelled = 0.0
        self._elapsed = 0.0
        self._applied_velocity = 0.0
