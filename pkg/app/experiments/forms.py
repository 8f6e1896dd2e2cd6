"""
Defines the WTForms classes that validate every experiment configuration.

The forms are filled from merged parameter dictionaries (data=...) rather
than from an HTTP form post, so they are plain wtforms.Form classes. Each
field checks the range the matching library operation accepts; model
invariants that involve several fields (stochastic matrices, etc.) are
checked by the domain types themselves.
"""

from wtforms import BooleanField, FieldList, FloatField, Form, IntegerField, StringField
from wtforms.validators import AnyOf, NumberRange, StopValidation, ValidationError

from app.domain.models import JumpKind, OutputFormat


# --- Fields and validators ---

class NumberField(FloatField):
    """A FloatField that coerces data given as numbers or numeric strings."""
    def process_data(self, value):
        if value is None or value == "":
            self.data = None
            return
        try:
            self.data = float(value)
        except (TypeError, ValueError):
            self.data = None
            raise ValueError(self.gettext("Not a valid float value."))


class CountField(IntegerField):
    """An IntegerField that rejects non-integral numbers."""
    def process_data(self, value):
        if value is None or value == "":
            self.data = None
            return
        try:
            number = float(value)
        except (TypeError, ValueError):
            self.data = None
            raise ValueError(self.gettext("Not a valid integer value."))
        if not number.is_integer():
            self.data = None
            raise ValueError(self.gettext("Not a valid integer value."))
        self.data = int(number)


class RequiredWhen():
    """
    Makes a field required only when another field has one of some values.

    An empty field stops the validation chain: with an error when it is
    required, silently otherwise.
    """
    field_flags = {"optional": True}

    def __init__(self, other: str, values: tuple, message=None):
        self.other = other
        self.values = values
        self.message = message

    def __call__(self, form, field):
        if field.data is not None:
            return
        if field.process_errors:
            # A value was given but could not be read.
            raise StopValidation()
        field.errors[:] = []
        if form[self.other].data in self.values:
            raise StopValidation(self.message or f"{field.name} is required when {self.other} is {form[self.other].data}.")
        raise StopValidation()


class Positive():
    """Requires a strictly positive number."""
    def __init__(self, message=None):
        self.message = message

    def __call__(self, form, field):
        if field.data is None or not field.data > 0:
            raise ValidationError(self.message or "Must be greater than 0.")


def _unit(message="Must be between 0 and 1."):
    return NumberRange(min=0.0, max=1.0, message=message)


def _correlation(message="Correlation degree must be between -1 and 1."):
    return NumberRange(min=-1.0, max=1.0, message=message)


SEED_RANGE = NumberRange(min=0, max=2 ** 64 - 1, message="Seed must be an unsigned 64-bit integer.")


# --- Experiment forms ---

class RateCurveForm(Form):
    """Form for 'rate-curve'."""
    b = NumberField("b", validators=[NumberRange(min=0.0, message="b must be non-negative.")])
    tau_r = NumberField("tau_r", validators=[Positive("tau_r must be positive.")])
    gamma = FieldList(NumberField("gamma", validators=[_correlation()]), min_entries=1)
    one_minus_theta = FieldList(NumberField("one_minus_theta", validators=[_unit()]), min_entries=1)


class SpectraForm(Form):
    """Form for 'spectra'."""
    b = NumberField("b", validators=[NumberRange(min=0.0, message="b must be non-negative.")])
    tau_r = NumberField("tau_r", validators=[Positive("tau_r must be positive.")])
    gamma = FieldList(NumberField("gamma", validators=[_correlation()]), min_entries=1)
    theta = NumberField("theta", validators=[_unit("theta must be between 0 and 1.")])
    points = CountField("points", validators=[NumberRange(min=2, message="Need at least 2 grid points.")])

    def validate_theta(self, field):
        if field.data is not None and field.data >= 1.0:
            raise ValidationError("theta must be below 1; F is a delta function at theta = 1.")


class DecayForm(Form):
    """Form for 'decay'."""
    delta_phi = NumberField("delta_phi", validators=[NumberRange(min=-3.2, max=3.2,
                                                                 message="delta_phi must be an angle in radians.")])
    p = NumberField("p", validators=[_unit("p must be between 0 and 1.")])
    n_max = CountField("n_max", validators=[NumberRange(min=0, message="n_max must be >= 0.")])
    with_montecarlo = BooleanField("with_montecarlo")
    trajectories = CountField("trajectories", validators=[
        RequiredWhen("with_montecarlo", (True,)),
        NumberRange(min=1, message="trajectories must be >= 1."),
    ])
    seed = CountField("seed", validators=[RequiredWhen("with_montecarlo", (True,)), SEED_RANGE])


_RANDOM_ANGLE_MODELS = (JumpKind.FIXED.value, JumpKind.IID_TWO_POINT.value, JumpKind.PERSISTENCE.value)


class MonteCarloForm(Form):
    """Form for 'montecarlo'."""
    model = StringField("model", validators=[AnyOf([kind.value for kind in JumpKind])])
    theta = NumberField("theta", validators=[_unit("theta must be between 0 and 1.")])
    n_max = CountField("n_max", validators=[NumberRange(min=0, message="n_max must be >= 0.")])
    trajectories = CountField("trajectories", validators=[NumberRange(min=1, message="trajectories must be >= 1.")])
    seed = CountField("seed", validators=[SEED_RANGE])
    delta_phi = NumberField("delta_phi", validators=[RequiredWhen("model", _RANDOM_ANGLE_MODELS)])
    p = NumberField("p", validators=[RequiredWhen("model", (JumpKind.PERSISTENCE.value,)),
                                     _unit("p must be between 0 and 1.")])
    values = FieldList(NumberField("values"))
    p0 = FieldList(NumberField("p0", validators=[_unit()]))
    transition = FieldList(FieldList(NumberField("transition", validators=[_unit()])))
    survival = BooleanField("survival")

    def validate_values(self, field):
        if self.model.data != JumpKind.FINITE_MARKOV.value:
            return
        if not field.data or not self.p0.data or not self.transition.data:
            raise ValidationError("values, p0 and transition are required for the markov model.")
        size = len(field.data)
        if len(self.p0.data) != size or len(self.transition.data) != size:
            raise ValidationError(f"p0 and transition must match the {size} values.")


class ValidateForm(Form):
    """Form for 'validate'."""
    b = NumberField("b", validators=[NumberRange(min=0.0, message="b must be non-negative.")])
    gamma = NumberField("gamma", validators=[_correlation()])
    tau_r = NumberField("tau_r", validators=[Positive("tau_r must be positive.")])
    theta = NumberField("theta", validators=[_unit("theta must be between 0 and 1.")])
    n = CountField("n", validators=[NumberRange(min=0, message="n must be >= 0.")])
    threshold = NumberField("threshold", validators=[Positive("threshold must be positive.")])


class ContinuousRateForm(Form):
    """Form for 'continuous-rate'."""
    k0 = NumberField("k0", validators=[NumberRange(min=0.0, message="k0 must be non-negative.")])
    gamma_r = NumberField("gamma_r", validators=[Positive("gamma_r must be positive.")])
    gamma0 = FieldList(NumberField("gamma0", validators=[NumberRange(min=0.0, message="gamma0 must be >= 0.")]),
                       min_entries=1)
    span = NumberField("span", validators=[Positive("span must be positive.")])


class OutputForm(Form):
    """Output options shared by every command."""
    format = StringField("format", validators=[AnyOf([fmt.value for fmt in OutputFormat])])


FORMS = {
    "rate-curve": RateCurveForm,
    "spectra": SpectraForm,
    "decay": DecayForm,
    "montecarlo": MonteCarloForm,
    "validate": ValidateForm,
    "continuous-rate": ContinuousRateForm,
}


def validate_params(name: str, params: dict) -> tuple[dict, dict]:
    """
    Validates merged parameters with the experiment's form.

    Args:
        name (str): Subcommand name.
        params (dict): Merged parameters.

    Returns:
        tuple[dict, dict]: (clean data, errors by field). The data is only
            meaningful when the errors are empty.
    """
    form_class = FORMS.get(name)
    if form_class is None:
        return {}, {"subcommand": [f"Unknown experiment '{name}'."]}

    form = form_class(data=params)
    unknown = sorted(set(params) - set(form._fields))

    errors = {}
    if not form.validate():
        errors.update(form.errors)
    if unknown:
        errors["unknown"] = [f"Unknown parameter(s): {', '.join(unknown)}"]
    return form.data, errors
